//! Root-tail-tail Δ-systems and certification of captured families.
//!
//! A family `⟨D_0, …, D_{s-1}⟩` is Δ-captured at level `l` when it is a
//! root-tail-tail Δ-system with root `R` of size `r`, every root point has
//! `Xi(l) = -1`, every tail point of `D_j` has `Xi(l) = j`, and matching tail
//! coordinates split exactly at `l` under Δ. Captured adds `rho = l` on the
//! same coordinates.

use std::collections::HashSet;
use std::fmt;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scheme::{Delta, MetricProfile, OrdSet, Ordinal};

/// Default number of tuples examined per (level, size) before the search
/// switches to sampling.
pub const DEFAULT_SEARCH_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaptureKind {
    DeltaCaptured,
    Captured,
}

impl fmt::Display for CaptureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaptureKind::DeltaCaptured => "delta_captured",
            CaptureKind::Captured => "captured",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CaptureWitness {
    pub level: usize,
    pub kind: CaptureKind,
    pub root: OrdSet,
    pub family: Vec<OrdSet>,
}

/// The clause a family failed, in the order they are tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    Precondition,
    RootTailTail,
    Delta,
    Xi,
    Rho,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Precondition => "precondition",
            Clause::RootTailTail => "root-tail-tail",
            Clause::Delta => "delta",
            Clause::Xi => "xi",
            Clause::Rho => "rho",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaptureFailure {
    pub clause: Clause,
    pub detail: String,
}

impl fmt::Display for CaptureFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} clause fails: {}", self.clause, self.detail)
    }
}

impl std::error::Error for CaptureFailure {}

impl From<CaptureFailure> for Error {
    fn from(f: CaptureFailure) -> Self {
        Error::Precondition(f.to_string())
    }
}

fn fail(clause: Clause, detail: String) -> CaptureFailure {
    CaptureFailure { clause, detail }
}

/// The common root if `family` is a root-tail-tail Δ-system, `None` otherwise
/// (including families with fewer than two members).
pub fn is_rtt_delta_system(family: &[OrdSet]) -> Option<OrdSet> {
    if family.len() < 2 {
        return None;
    }
    let root: OrdSet = intersect(&family[0], &family[1]);
    for (i, x) in family.iter().enumerate() {
        for y in &family[i + 1..] {
            if intersect(x, y) != root {
                return None;
            }
        }
    }
    let mut tails: Vec<&[Ordinal]> = Vec::with_capacity(family.len());
    for x in family {
        let tail = &x[root.len()..];
        // root elements are the smallest points of every member
        if x[..root.len()] != root[..] || tail.is_empty() {
            return None;
        }
        if let (Some(&top), Some(&low)) = (root.last(), tail.first()) {
            if top >= low {
                return None;
            }
        }
        tails.push(tail);
    }
    tails.sort_by_key(|t| t[0]);
    if tails.windows(2).any(|w| w[0][w[0].len() - 1] >= w[1][0]) {
        return None;
    }
    Some(root)
}

fn intersect(a: &[Ordinal], b: &[Ordinal]) -> OrdSet {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn check_shape(
    profile: &MetricProfile<'_>,
    family: &[OrdSet],
    level: usize,
) -> Result<(), CaptureFailure> {
    if family.len() < 2 {
        return Err(fail(
            Clause::Precondition,
            format!("a family needs at least 2 sets, got {}", family.len()),
        ));
    }
    if level == 0 || level > profile.rank() {
        return Err(fail(
            Clause::Precondition,
            format!("level {level} is outside 1..={}", profile.rank()),
        ));
    }
    let m = family[0].len();
    for d in family {
        if d.len() != m || d.is_empty() {
            return Err(fail(
                Clause::Precondition,
                format!("sets must be nonempty and of equal size {m}, found {d:?}"),
            ));
        }
        if d.windows(2).any(|w| w[0] >= w[1]) {
            return Err(fail(
                Clause::Precondition,
                format!("{d:?} is not strictly increasing"),
            ));
        }
        if let Some(&x) = d.iter().find(|&&x| x >= profile.domain()) {
            return Err(fail(
                Clause::Precondition,
                format!("ordinal {x} is outside the domain {}", profile.domain()),
            ));
        }
    }
    Ok(())
}

/// Certify `family` as captured (or Δ-captured) at `level`, or name the
/// first clause that fails. Clauses run in the order root-tail-tail, Δ, Xi,
/// rho.
pub fn check_capture(
    profile: &MetricProfile<'_>,
    family: &[OrdSet],
    level: usize,
    kind: CaptureKind,
) -> Result<CaptureWitness, CaptureFailure> {
    check_shape(profile, family, level)?;
    let root = is_rtt_delta_system(family).ok_or_else(|| {
        fail(
            Clause::RootTailTail,
            "family is not a root-tail-tail Δ-system".into(),
        )
    })?;
    let r = root.len();
    let m = family[0].len();
    for a in r..m {
        for (j, dj) in family.iter().enumerate() {
            for di in &family[j + 1..] {
                let d = profile.delta(dj[a], di[a]);
                if d != Delta::At(level) {
                    return Err(fail(
                        Clause::Delta,
                        format!("Δ({},{}) = {d} ≠ {level}", dj[a], di[a]),
                    ));
                }
            }
        }
    }
    for (j, dj) in family.iter().enumerate() {
        for (a, &x) in dj.iter().enumerate() {
            let want = if a < r { -1 } else { j as i64 };
            let got = profile.xi(x, level);
            if got != want {
                return Err(fail(
                    Clause::Xi,
                    format!("Ξ_{x}({level}) = {got}, expected {want}"),
                ));
            }
        }
    }
    if kind == CaptureKind::Captured {
        for a in r..m {
            for (j, dj) in family.iter().enumerate() {
                for di in &family[j + 1..] {
                    let rho = profile.rho(dj[a], di[a]);
                    if rho != level {
                        return Err(fail(
                            Clause::Rho,
                            format!("ρ({},{}) = {rho} ≠ {level}", dj[a], di[a]),
                        ));
                    }
                }
            }
        }
    }
    Ok(CaptureWitness {
        level,
        kind,
        root,
        family: family.to_vec(),
    })
}

/// The tails of the canonical decomposition of a level-`level` set, packaged
/// as a captured family at `level`.
pub fn canonical_capture(
    profile: &MetricProfile<'_>,
    level: usize,
    set: &[Ordinal],
) -> Result<CaptureWitness> {
    let d = profile
        .scheme()
        .decomposition(level, set)
        .ok_or_else(|| Error::Precondition(format!("{set:?} is not a level-{level} set")))?;
    Ok(check_capture(
        profile,
        &d.tails(),
        level,
        CaptureKind::Captured,
    )?)
}

/// One canonical family of disjoint `arity`-tuples: `D_j = F_j[S]` for a
/// level-`level` set `F`, its pieces `F_j`, and positions `S` drawn from the
/// tail block `[r_l, m_{l-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalFamily {
    pub level: usize,
    pub set_index: usize,
    pub positions: Vec<usize>,
    pub family: Vec<OrdSet>,
}

/// Every canonical family of `arity`-tuples at `level`. Empty when the tail
/// block is shorter than `arity`.
pub fn canonical_tuple_families(
    profile: &MetricProfile<'_>,
    level: usize,
    arity: usize,
) -> Result<Vec<CanonicalFamily>> {
    let s = profile.scheme();
    s.check_level(level)?;
    if level == 0 {
        return Err(Error::Precondition(
            "canonical families live at levels >= 1".into(),
        ));
    }
    let t = s.type_seq();
    let r = t.root_size(level);
    let tail = t.tail_size(level);
    let position_sets: Vec<Vec<usize>> = combinations(tail, arity)
        .map(|c| c.iter().map(|p| p + r).collect())
        .collect();
    let mut out = Vec::new();
    for (idx, f) in s.level(level).iter().enumerate() {
        let d = s.decomposition(level, f).expect("stored sets decompose");
        for pos in &position_sets {
            let family = d
                .pieces
                .iter()
                .map(|p| pos.iter().map(|&q| p[q]).collect())
                .collect();
            out.push(CanonicalFamily {
                level,
                set_index: idx,
                positions: pos.clone(),
                family,
            });
        }
    }
    Ok(out)
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let c = cur.as_mut().expect("checked above");
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaptureQuery {
    /// Levels to search; empty means every level `1..=K`.
    pub levels: Vec<usize>,
    /// Family sizes; empty means `{2, n_l}` at each level `l`.
    pub sizes: Vec<usize>,
    pub kind: CaptureKind,
    pub cap: usize,
    pub seed: u64,
}

impl Default for CaptureQuery {
    fn default() -> Self {
        CaptureQuery {
            levels: Vec::new(),
            sizes: Vec::new(),
            kind: CaptureKind::Captured,
            cap: DEFAULT_SEARCH_CAP,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Sampled { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchCoverage {
    pub level: usize,
    pub size: usize,
    pub examined: u64,
    /// Number of unordered tuples in the pool, saturating.
    pub total: u128,
    #[serde(flatten)]
    pub mode: SearchMode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaptureSearch {
    pub witnesses: Vec<CaptureWitness>,
    pub coverage: Vec<SearchCoverage>,
}

/// Search `pool` for families captured (or Δ-captured) at the requested
/// levels. Each unordered tuple is tried once, in the only order that can
/// pass the Xi clause: by the Xi value of the first tail point.
pub fn find_captures(
    profile: &MetricProfile<'_>,
    pool: &[OrdSet],
    query: &CaptureQuery,
) -> Result<CaptureSearch> {
    let mut pool: Vec<OrdSet> = pool.to_vec();
    pool.sort();
    pool.dedup();
    if let Some(first) = pool.first() {
        if pool.iter().any(|p| p.len() != first.len()) {
            return Err(Error::Precondition("pool sets must have equal size".into()));
        }
    }
    for p in &pool {
        for &x in p {
            profile.check(x)?;
        }
    }
    let rank = profile.rank();
    let levels: Vec<usize> = if query.levels.is_empty() {
        (1..=rank).collect()
    } else {
        query.levels.clone()
    };
    for &l in &levels {
        if l == 0 || l > rank {
            return Err(Error::LevelOutOfRange { level: l, rank });
        }
    }
    let mut witnesses = Vec::new();
    let mut coverage = Vec::new();
    if pool.is_empty() {
        return Ok(CaptureSearch {
            witnesses,
            coverage,
        });
    }
    let t = profile.scheme().type_seq();
    for &l in &levels {
        let mut sizes: Vec<usize> = if query.sizes.is_empty() {
            vec![2, t.pieces(l)]
        } else {
            query.sizes.clone()
        };
        sizes.sort_unstable();
        sizes.dedup();
        for s in sizes {
            if s < 2 {
                return Err(Error::Precondition(format!("family size {s} is below 2")));
            }
            let total = binomial(pool.len(), s);
            let mut try_combo = |combo: &[usize]| {
                let fam: Vec<OrdSet> = combo.iter().map(|&i| pool[i].clone()).collect();
                if let Some(w) = certify_unordered(profile, fam, l, query.kind) {
                    witnesses.push(w);
                }
            };
            if total <= query.cap as u128 {
                let mut examined = 0;
                for c in combinations(pool.len(), s) {
                    examined += 1;
                    try_combo(&c);
                }
                coverage.push(SearchCoverage {
                    level: l,
                    size: s,
                    examined,
                    total,
                    mode: SearchMode::Exhaustive,
                });
            } else {
                let seed = query.seed ^ ((l as u64) << 32) ^ s as u64;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut seen: HashSet<Vec<usize>> = HashSet::new();
                let mut attempts = 0usize;
                while seen.len() < query.cap && attempts < query.cap.saturating_mul(4) {
                    attempts += 1;
                    let mut c = sample(&mut rng, pool.len(), s).into_vec();
                    c.sort_unstable();
                    if seen.insert(c.clone()) {
                        try_combo(&c);
                    }
                }
                coverage.push(SearchCoverage {
                    level: l,
                    size: s,
                    examined: seen.len() as u64,
                    total,
                    mode: SearchMode::Sampled { seed: query.seed },
                });
            }
        }
    }
    witnesses.sort();
    witnesses.dedup();
    Ok(CaptureSearch {
        witnesses,
        coverage,
    })
}

fn certify_unordered(
    profile: &MetricProfile<'_>,
    mut fam: Vec<OrdSet>,
    level: usize,
    kind: CaptureKind,
) -> Option<CaptureWitness> {
    let root = is_rtt_delta_system(&fam)?;
    let r = root.len();
    fam.sort_by_key(|d| profile.xi(d[r], level));
    check_capture(profile, &fam, level, kind).ok()
}
