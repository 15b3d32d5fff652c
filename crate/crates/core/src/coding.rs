//! Integer-sequence codings of ordinals: `e^n`, `o^n` and the raw Xi
//! sequence, ordered lexicographically with the comparison decided at Δ.

use std::cmp::Ordering;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::report::Check;
use crate::scheme::{
    lex_by_delta, seq_delta, Delta, MetricProfile, OrdSet, Ordinal, SchemeTypeSeq,
};

/// Subsets of `lo..hi` of size at most `n`, by size and then colex.
pub fn small_subsets(lo: usize, hi: usize, n: usize) -> Vec<OrdSet> {
    let mut out = Vec::new();
    let t = hi.saturating_sub(lo);
    for size in 0..=n.min(t) {
        let mut batch: Vec<OrdSet> = crate::capture::combinations(t, size)
            .map(|c| c.into_iter().map(|x| x + lo).collect())
            .collect();
        // colex: compare from the largest element down
        batch.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        out.extend(batch);
    }
    out
}

/// The list `C^k_1, …, C^k_{slots}` for one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelEnumeration {
    pub level: usize,
    pub base: (usize, usize),
    pub slots: usize,
    /// Distinct subsets actually placed, in slot order.
    pub subsets: Vec<OrdSet>,
    /// Whether every subset of size `<= n` got a slot.
    pub complete: bool,
}

impl LevelEnumeration {
    /// Enumerate subsets of `lo..hi` of size `<= n` into `slots` slots,
    /// padding with the last subset, or truncating when there are too few
    /// slots.
    pub fn new(level: usize, lo: usize, hi: usize, n: usize, slots: usize) -> Self {
        let mut subsets = small_subsets(lo, hi, n);
        let complete = subsets.len() <= slots;
        subsets.truncate(slots);
        LevelEnumeration {
            level,
            base: (lo, hi),
            slots,
            subsets,
            complete,
        }
    }

    /// `C^k_i` for `1 <= i <= slots`.
    pub fn get(&self, i: usize) -> Option<&OrdSet> {
        if i == 0 || i > self.slots {
            return None;
        }
        self.subsets.get(i - 1).or_else(|| self.subsets.last())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetEnumeration {
    n: usize,
    levels: Vec<LevelEnumeration>,
}

impl SubsetEnumeration {
    /// Enumerations for `k < K`, failing with `InsufficientWidth` when some
    /// `n_{k+1} - 1` is below the number of subsets to cover.
    pub fn build(t: &SchemeTypeSeq, n: usize) -> Result<Self> {
        let e = Self::build_truncated(t, n);
        if let Some(l) = e.levels.iter().find(|l| !l.complete) {
            return Err(Error::InsufficientWidth {
                level: l.level,
                needed: small_subsets(l.base.0, l.base.1, n).len() + 1,
                available: l.slots + 1,
            });
        }
        Ok(e)
    }

    /// Like [`SubsetEnumeration::build`], but narrow levels are truncated and
    /// flagged instead of rejected.
    pub fn build_truncated(t: &SchemeTypeSeq, n: usize) -> Self {
        let levels = (0..t.rank())
            .map(|k| {
                LevelEnumeration::new(
                    k,
                    t.root_size(k + 1),
                    t.level_size(k),
                    n,
                    t.pieces(k + 1) - 1,
                )
            })
            .collect();
        SubsetEnumeration { n, levels }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &[LevelEnumeration] {
        &self.levels
    }

    pub fn is_complete(&self) -> bool {
        self.levels.iter().all(|l| l.complete)
    }

    pub fn get(&self, k: usize, i: usize) -> Option<&OrdSet> {
        self.levels.get(k)?.get(i)
    }

    /// The least slot holding `c` at level `k`.
    pub fn index_of(&self, k: usize, c: &[usize]) -> Option<usize> {
        self.levels
            .get(k)?
            .subsets
            .iter()
            .position(|s| s == c)
            .map(|p| p + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    E,
    O,
    Xi,
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeKind::E => "e",
            CodeKind::O => "o",
            CodeKind::Xi => "xi",
        })
    }
}

impl FromStr for CodeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" => Ok(CodeKind::E),
            "o" => Ok(CodeKind::O),
            "xi" => Ok(CodeKind::Xi),
            other => Err(Error::Malformed(format!("unknown coding kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CodedPoint {
    pub kind: CodeKind,
    pub n: usize,
    pub alpha: Ordinal,
    pub seq: Vec<i64>,
}

/// One entry of `e^n_alpha` or `o^n_alpha` at level `k >= 1`.
fn signed_entry(kind: CodeKind, n: usize, xi: i64, card_below: usize, c: &[usize]) -> i64 {
    if xi <= 0 {
        return 0;
    }
    if c.binary_search(&card_below).is_ok() {
        return xi;
    }
    if kind == CodeKind::E && c.len() == n && c.first().is_some_and(|&lo| card_below < lo) {
        return xi;
    }
    -xi
}

pub fn code_point(
    profile: &MetricProfile<'_>,
    en: &SubsetEnumeration,
    kind: CodeKind,
    alpha: Ordinal,
) -> Result<CodedPoint> {
    profile.check(alpha)?;
    let width = profile.rank() + 1;
    let seq = match kind {
        CodeKind::Xi => profile.xi_seq(alpha).iter().map(|&x| x as i64).collect(),
        CodeKind::E | CodeKind::O => {
            if en.levels.len() != profile.rank() {
                return Err(Error::Precondition(
                    "enumeration was built for a different type".into(),
                ));
            }
            let mut seq = vec![0i64; width];
            for (k, slot) in seq.iter_mut().enumerate().skip(1) {
                let xi = profile.xi(alpha, k);
                if xi > 0 {
                    let c = en.get(k - 1, xi as usize).ok_or_else(|| {
                        Error::Precondition(format!("no enumeration slot {xi} at level {}", k - 1))
                    })?;
                    *slot = signed_entry(kind, en.n, xi, profile.card(alpha, k - 1), c);
                }
            }
            seq
        }
    };
    let n = if kind == CodeKind::Xi { 0 } else { en.n };
    Ok(CodedPoint {
        kind,
        n,
        alpha,
        seq,
    })
}

/// Lexicographic comparison of two coded points, with the deciding level.
pub fn lex_compare(p: &CodedPoint, q: &CodedPoint) -> Result<(Ordering, Delta)> {
    if p.kind != q.kind || p.n != q.n {
        return Err(Error::KindMismatch);
    }
    Ok(lex_by_delta(&p.seq, &q.seq))
}

/// Every ordinal of the domain coded once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodedFamily {
    pub kind: CodeKind,
    pub n: usize,
    pub points: Vec<CodedPoint>,
}

impl CodedFamily {
    pub fn new(
        profile: &MetricProfile<'_>,
        en: &SubsetEnumeration,
        kind: CodeKind,
    ) -> Result<Self> {
        let points = (0..profile.domain())
            .map(|a| code_point(profile, en, kind, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(CodedFamily {
            kind,
            n: if kind == CodeKind::Xi { 0 } else { en.n },
            points,
        })
    }

    pub fn seq(&self, alpha: Ordinal) -> &[i64] {
        &self.points[alpha].seq
    }

    pub fn less(&self, alpha: Ordinal, beta: Ordinal) -> bool {
        self.seq(alpha) < self.seq(beta)
    }

    /// Ordinals sorted by their coded sequences.
    pub fn lex_sorted(&self) -> Vec<Ordinal> {
        let mut v: Vec<Ordinal> = (0..self.points.len()).collect();
        v.sort_by(|&a, &b| self.seq(a).cmp(self.seq(b)).then(a.cmp(&b)));
        v
    }

    /// `alpha,kind,k0,k1,…` with one row per ordinal, in the given order.
    pub fn to_csv(&self, order: &[Ordinal]) -> String {
        let width = self.points.first().map_or(0, |p| p.seq.len());
        let mut out = String::from("alpha,kind");
        for k in 0..width {
            let _ = write!(out, ",k{k}");
        }
        out.push('\n');
        for &a in order {
            let _ = write!(out, "{a},{}", self.kind);
            for v in self.seq(a) {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }
}

/// `Δ(alpha, beta)` agrees with Δ of the `e`, `o` and Xi sequences for
/// every pair.
pub fn delta_transfer_check(profile: &MetricProfile<'_>, en: &SubsetEnumeration) -> Result<Check> {
    let fams = [
        CodedFamily::new(profile, en, CodeKind::E)?,
        CodedFamily::new(profile, en, CodeKind::O)?,
        CodedFamily::new(profile, en, CodeKind::Xi)?,
    ];
    let n = profile.domain();
    let failures = par::flat_map_range(n, |a| {
        let mut bad = Vec::new();
        for b in a..n {
            let d = profile.delta(a, b);
            for f in &fams {
                let got = seq_delta(f.seq(a), f.seq(b));
                if got != d {
                    bad.push(format!(
                        "Δ({a},{b}) = {d} but Δ of {} codes = {got}",
                        f.kind
                    ));
                }
            }
        }
        bad
    });
    let mut c = Check::new(format!("delta_transfer(n={})", en.n));
    c.absorb((n * (n + 1) / 2 * fams.len()) as u64, failures);
    Ok(c)
}
