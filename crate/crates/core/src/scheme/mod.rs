//! Finite-rank construction schemes over the ordinal `m_K = {0, ..., m_K - 1}`.
//!
//! [`Scheme::build`] produces the single-top scheme: the top level is the
//! whole domain and every lower level collects the canonical pieces of the
//! level above. Schemes can also be assembled from raw levels (e.g. a JSON
//! file), in which case nothing beyond basic shape is assumed and
//! [`verify::verify_scheme_axioms`] is the judge.

mod metric;
mod type_seq;
pub mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use metric::{lex_by_delta, seq_delta, Delta, MetricProfile};
pub use type_seq::{
    generate_type_seq, subsets_up_to, Growth, SchemeTypeSeq, Step, DEFAULT_DOMAIN_CAP,
};

pub type Ordinal = usize;

/// A finite set of ordinals as a strictly increasing vector.
pub type OrdSet = Vec<Ordinal>;

/// The canonical decomposition of a level-`k+1` set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub root: OrdSet,
    pub pieces: Vec<OrdSet>,
}

impl Decomposition {
    pub fn tails(&self) -> Vec<OrdSet> {
        let r = self.root.len();
        self.pieces.iter().map(|p| p[r..].to_vec()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scheme {
    type_seq: SchemeTypeSeq,
    domain: usize,
    levels: Vec<Vec<OrdSet>>,
    /// `members[k][alpha]`: indices into `levels[k]` of the sets containing `alpha`.
    members: Vec<Vec<Vec<u32>>>,
}

/// Canonical decomposition by the block identity: piece `i` is the root
/// `F[0..r)` followed by `F[a_i .. a_i + (m_k - r))`, `a_i = r + i (m_k - r)`.
///
/// `None` when `set` does not have exactly `m_{k+1}` points.
pub fn decompose(t: &SchemeTypeSeq, k_plus_1: usize, set: &[Ordinal]) -> Option<Decomposition> {
    if k_plus_1 == 0 || k_plus_1 > t.rank() || set.len() != t.level_size(k_plus_1) {
        return None;
    }
    let r = t.root_size(k_plus_1);
    let tail = t.tail_size(k_plus_1);
    let root = set[..r].to_vec();
    let pieces = (0..t.pieces(k_plus_1))
        .map(|i| {
            let a = r + i * tail;
            let mut p = root.clone();
            p.extend_from_slice(&set[a..a + tail]);
            p
        })
        .collect();
    Some(Decomposition { root, pieces })
}

impl Scheme {
    /// The single-top scheme of type `t` on the domain `m_K`.
    pub fn build(t: &SchemeTypeSeq) -> Scheme {
        let rank = t.rank();
        let mut levels: Vec<Vec<OrdSet>> = vec![Vec::new(); rank + 1];
        levels[rank] = vec![(0..t.top_size()).collect()];
        for k in (0..rank).rev() {
            let mut next: BTreeSet<OrdSet> = BTreeSet::new();
            for f in &levels[k + 1] {
                let d = decompose(t, k + 1, f).expect("generated sets have level size");
                next.extend(d.pieces);
            }
            levels[k] = next.into_iter().collect();
        }
        Scheme::assemble(t.clone(), levels)
    }

    /// Assemble a scheme from explicit levels. Only shape is checked here:
    /// one level per rank step plus the top, sets strictly increasing and
    /// inside the domain `m_K`. Axiom violations are left for the verifier.
    pub fn from_levels(t: SchemeTypeSeq, levels: Vec<Vec<OrdSet>>) -> Result<Scheme> {
        if levels.len() != t.rank() + 1 {
            return Err(Error::Malformed(format!(
                "expected {} levels for rank {}, found {}",
                t.rank() + 1,
                t.rank(),
                levels.len()
            )));
        }
        let domain = t.top_size();
        for (k, level) in levels.iter().enumerate() {
            for set in level {
                if set.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Malformed(format!(
                        "level {k}: set {set:?} is not strictly increasing"
                    )));
                }
                if let Some(&x) = set.iter().find(|&&x| x >= domain) {
                    return Err(Error::OutOfDomain { ordinal: x, domain });
                }
            }
        }
        let levels = levels
            .into_iter()
            .map(|l| l.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        Ok(Scheme::assemble(t, levels))
    }

    fn assemble(type_seq: SchemeTypeSeq, levels: Vec<Vec<OrdSet>>) -> Scheme {
        let domain = type_seq.top_size();
        let members = levels
            .iter()
            .map(|level| {
                let mut m = vec![Vec::new(); domain];
                for (i, set) in level.iter().enumerate() {
                    for &x in set {
                        m[x].push(i as u32);
                    }
                }
                m
            })
            .collect();
        Scheme {
            type_seq,
            domain,
            levels,
            members,
        }
    }

    pub fn type_seq(&self) -> &SchemeTypeSeq {
        &self.type_seq
    }

    pub fn rank(&self) -> usize {
        self.type_seq.rank()
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn levels(&self) -> &[Vec<OrdSet>] {
        &self.levels
    }

    pub fn level(&self, k: usize) -> &[OrdSet] {
        &self.levels[k]
    }

    pub fn contains_set(&self, k: usize, set: &[Ordinal]) -> bool {
        self.levels
            .get(k)
            .is_some_and(|l| l.binary_search_by(|x| x.as_slice().cmp(set)).is_ok())
    }

    /// Level-`k` sets containing `alpha`.
    pub fn sets_containing(&self, k: usize, alpha: Ordinal) -> impl Iterator<Item = &OrdSet> + '_ {
        self.members[k][alpha]
            .iter()
            .map(move |&i| &self.levels[k][i as usize])
    }

    pub fn decomposition(&self, k_plus_1: usize, set: &[Ordinal]) -> Option<Decomposition> {
        decompose(&self.type_seq, k_plus_1, set)
    }

    pub(crate) fn check_ordinal(&self, alpha: Ordinal) -> Result<()> {
        if alpha >= self.domain {
            return Err(Error::OutOfDomain {
                ordinal: alpha,
                domain: self.domain,
            });
        }
        Ok(())
    }

    pub(crate) fn check_level(&self, k: usize) -> Result<()> {
        if k > self.rank() {
            return Err(Error::LevelOutOfRange {
                level: k,
                rank: self.rank(),
            });
        }
        Ok(())
    }

    /// `rho(alpha, beta)`: the least level with a set containing both.
    pub fn rho(&self, alpha: Ordinal, beta: Ordinal) -> Result<usize> {
        self.check_ordinal(alpha)?;
        self.check_ordinal(beta)?;
        (0..=self.rank())
            .find(|&k| {
                self.sets_containing(k, alpha)
                    .any(|f| f.binary_search(&beta).is_ok())
            })
            .ok_or_else(|| {
                Error::IllFormedScheme(format!("no set contains both {alpha} and {beta}"))
            })
    }

    /// `rho^A`, the largest `rho` over pairs from `set`.
    pub fn rho_of_set(&self, set: &[Ordinal]) -> Result<usize> {
        let mut best = 0;
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i + 1..] {
                best = best.max(self.rho(a, b)?);
            }
        }
        Ok(best)
    }

    /// The `k`-closure `{xi <= alpha : rho(alpha, xi) <= k}`.
    pub fn closure(&self, alpha: Ordinal, k: usize) -> Result<OrdSet> {
        self.check_ordinal(alpha)?;
        self.check_level(k)?;
        let mut out = BTreeSet::new();
        for j in 0..=k {
            for f in self.sets_containing(j, alpha) {
                out.extend(f.iter().copied().take_while(|&x| x <= alpha));
            }
        }
        Ok(out.into_iter().collect())
    }

    /// `||alpha||_k = |(alpha)_k \ {alpha}|` for `k = 0..=K`.
    pub fn card_fn(&self, alpha: Ordinal) -> Result<Vec<usize>> {
        (0..=self.rank())
            .map(|k| Ok(self.closure(alpha, k)?.len() - 1))
            .collect()
    }

    /// `Xi_alpha(0..=K)`: `-1` in the root of the level-`k` sets around
    /// `alpha`, otherwise the index of the canonical piece holding it. Every
    /// witnessing set is consulted and must agree.
    pub fn xi(&self, alpha: Ordinal) -> Result<Vec<i64>> {
        self.check_ordinal(alpha)?;
        let mut out = vec![0i64];
        for k in 1..=self.rank() {
            let mut value: Option<i64> = None;
            for f in self.sets_containing(k, alpha) {
                let v = xi_in_set(&self.type_seq, k, f, alpha).ok_or_else(|| {
                    Error::IllFormedScheme(format!("level-{k} set {f:?} has the wrong size"))
                })?;
                match value {
                    None => value = Some(v),
                    Some(w) if w != v => {
                        return Err(Error::IllFormedScheme(format!(
                            "Xi_{alpha}({k}) is {w} in one witness and {v} in {f:?}"
                        )))
                    }
                    _ => {}
                }
            }
            out.push(value.ok_or_else(|| {
                Error::IllFormedScheme(format!("{alpha} lies in no level-{k} set"))
            })?);
        }
        Ok(out)
    }

    /// `Delta(alpha, beta)`, read off the cardinality functions.
    pub fn delta(&self, alpha: Ordinal, beta: Ordinal) -> Result<Delta> {
        Ok(seq_delta(&self.card_fn(alpha)?, &self.card_fn(beta)?))
    }

    /// Canonical JSON form.
    pub fn to_file(&self) -> SchemeFile {
        SchemeFile {
            type_seq: self.type_seq.entries(),
            rank: self.rank(),
            levels: self.levels.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("scheme serializes")
    }

    pub fn from_json(s: &str) -> Result<Scheme> {
        let file: SchemeFile =
            serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        file.into_scheme()
    }

    /// Graphviz rendering of the decomposition DAG: one node per set, one
    /// edge per canonical piece, roots in the node labels.
    pub fn to_dot(&self) -> String {
        let mut ids: BTreeMap<(usize, &OrdSet), usize> = BTreeMap::new();
        let mut out = String::from(
            "digraph scheme {\n  rankdir=TB;\n  node [shape=box, fontname=\"monospace\"];\n",
        );
        for k in (0..=self.rank()).rev() {
            for set in &self.levels[k] {
                let id = ids.len();
                ids.insert((k, set), id);
                let root = if k >= 1 {
                    let r = self.type_seq.root_size(k);
                    format!("\\nR={}", fmt_set(&set[..r.min(set.len())]))
                } else {
                    String::new()
                };
                let _ = writeln!(out, "  n{id} [label=\"L{k} {}{root}\"];", fmt_set(set));
            }
        }
        for k in (1..=self.rank()).rev() {
            for set in &self.levels[k] {
                let Some(d) = self.decomposition(k, set) else {
                    continue;
                };
                let from = ids[&(k, set)];
                for (i, piece) in d.pieces.iter().enumerate() {
                    match ids.get(&(k - 1, piece)) {
                        Some(to) => {
                            let _ = writeln!(out, "  n{from} -> n{to} [label=\"{i}\"];");
                        }
                        None => {
                            let _ = writeln!(
                                out,
                                "  n{from} -> missing_{from}_{i} [label=\"{i}\", style=dashed];"
                            );
                        }
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn fmt_set(s: &[Ordinal]) -> String {
    let inner: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

pub(crate) fn xi_in_set(t: &SchemeTypeSeq, k: usize, f: &[Ordinal], alpha: Ordinal) -> Option<i64> {
    if f.len() != t.level_size(k) {
        return None;
    }
    let p = f.binary_search(&alpha).ok()?;
    let r = t.root_size(k);
    if p < r {
        Some(-1)
    } else {
        Some(((p - r) / t.tail_size(k)) as i64)
    }
}

/// On-disk scheme: `{"type_seq": [[m,n,r],...], "rank": K, "levels": [[[...]...]...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub type_seq: Vec<[usize; 3]>,
    pub rank: usize,
    pub levels: Vec<Vec<OrdSet>>,
}

impl SchemeFile {
    pub fn into_scheme(self) -> Result<Scheme> {
        if self.rank != self.type_seq.len() {
            return Err(Error::Malformed(format!(
                "rank {} but {} type entries",
                self.rank,
                self.type_seq.len()
            )));
        }
        let t = SchemeTypeSeq::from_entries(&self.type_seq, None)?;
        Scheme::from_levels(t, self.levels)
    }
}
