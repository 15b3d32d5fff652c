use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{xi_in_set, Ordinal, Scheme};
use crate::error::{Error, Result};

/// `Delta` of two sequences: the first index where they differ, or `Same`
/// when they agree everywhere (the finite stand-in for `omega`).
///
/// `Same` sorts above every level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Delta {
    At(usize),
    Same,
}

impl Delta {
    /// Level number with `Same` mapped to the sentinel `rank + 1`.
    pub fn as_level(self, rank: usize) -> usize {
        match self {
            Delta::At(k) => k,
            Delta::Same => rank + 1,
        }
    }

    pub fn level(self) -> Option<usize> {
        match self {
            Delta::At(k) => Some(k),
            Delta::Same => None,
        }
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delta::At(k) => write!(f, "{k}"),
            Delta::Same => f.write_str("same"),
        }
    }
}

impl Serialize for Delta {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Delta::At(k) => s.serialize_u64(*k as u64),
            Delta::Same => s.serialize_str("same"),
        }
    }
}

pub fn seq_delta<T: PartialEq>(a: &[T], b: &[T]) -> Delta {
    match a.iter().zip(b).position(|(x, y)| x != y) {
        Some(k) => Delta::At(k),
        None if a.len() == b.len() => Delta::Same,
        None => Delta::At(a.len().min(b.len())),
    }
}

/// Precomputed `||alpha||_k` and `Xi_alpha(k)` tables.
///
/// Built through the closure identity: for any level-`k` set `F` containing
/// `alpha`, `(alpha)_k = F ∩ (alpha + 1)`, so `||alpha||_k` is the position
/// of `alpha` in `F`. The definitional routes live on [`Scheme`]; the
/// verifiers compare the two.
#[derive(Clone, Debug)]
pub struct MetricProfile<'s> {
    scheme: &'s Scheme,
    width: usize,
    card: Vec<u32>,
    xi: Vec<i32>,
    home: Vec<u32>,
}

impl<'s> MetricProfile<'s> {
    pub fn new(scheme: &'s Scheme) -> Result<Self> {
        let t = scheme.type_seq();
        let width = scheme.rank() + 1;
        let n = scheme.domain();
        let mut card = vec![0u32; n * width];
        let mut xi = vec![0i32; n * width];
        let mut home = vec![0u32; n * width];
        for alpha in 0..n {
            for k in 0..width {
                let &idx = scheme.members[k][alpha].first().ok_or_else(|| {
                    Error::IllFormedScheme(format!("{alpha} lies in no level-{k} set"))
                })?;
                let f = &scheme.levels[k][idx as usize];
                if f.len() != t.level_size(k) {
                    return Err(Error::IllFormedScheme(format!(
                        "level-{k} set {f:?} has the wrong size"
                    )));
                }
                let pos = f.binary_search(&alpha).expect("membership index is exact");
                let i = alpha * width + k;
                card[i] = pos as u32;
                home[i] = idx;
                if k >= 1 {
                    xi[i] = xi_in_set(t, k, f, alpha).expect("size checked") as i32;
                }
            }
        }
        Ok(MetricProfile {
            scheme,
            width,
            card,
            xi,
            home,
        })
    }

    pub fn scheme(&self) -> &'s Scheme {
        self.scheme
    }

    pub fn rank(&self) -> usize {
        self.width - 1
    }

    pub fn domain(&self) -> usize {
        self.scheme.domain()
    }

    pub fn card_fn(&self, alpha: Ordinal) -> &[u32] {
        &self.card[alpha * self.width..(alpha + 1) * self.width]
    }

    pub fn card(&self, alpha: Ordinal, k: usize) -> usize {
        self.card[alpha * self.width + k] as usize
    }

    pub fn xi_seq(&self, alpha: Ordinal) -> &[i32] {
        &self.xi[alpha * self.width..(alpha + 1) * self.width]
    }

    pub fn xi(&self, alpha: Ordinal, k: usize) -> i64 {
        self.xi[alpha * self.width + k] as i64
    }

    pub fn delta(&self, alpha: Ordinal, beta: Ordinal) -> Delta {
        seq_delta(self.card_fn(alpha), self.card_fn(beta))
    }

    /// A level-`k` set containing `alpha`.
    pub fn home(&self, alpha: Ordinal, k: usize) -> &'s [Ordinal] {
        &self.scheme.levels[k][self.home[alpha * self.width + k] as usize]
    }

    /// `rho` through closures: for `alpha < beta`, the least `k` with
    /// `alpha ∈ (beta)_k`.
    pub fn rho(&self, alpha: Ordinal, beta: Ordinal) -> usize {
        let (lo, hi) = if alpha <= beta {
            (alpha, beta)
        } else {
            (beta, alpha)
        };
        if lo == hi {
            return 0;
        }
        (1..self.width)
            .find(|&k| self.home(hi, k).binary_search(&lo).is_ok())
            .unwrap_or(self.width)
    }

    pub fn rho_of_set(&self, set: &[Ordinal]) -> usize {
        let mut best = 0;
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i + 1..] {
                best = best.max(self.rho(a, b));
            }
        }
        best
    }

    pub fn closure(&self, alpha: Ordinal, k: usize) -> &'s [Ordinal] {
        let f = self.home(alpha, k);
        &f[..=self.card(alpha, k)]
    }

    pub fn check(&self, alpha: Ordinal) -> Result<()> {
        self.scheme.check_ordinal(alpha)
    }
}

/// Lexicographic comparison keyed by `Delta`: decided at the first
/// differing coordinate.
pub fn lex_by_delta<T: Ord>(a: &[T], b: &[T]) -> (Ordering, Delta) {
    let d = seq_delta(a, b);
    let ord = match d {
        Delta::At(k) => match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => x.cmp(y),
            (None, _) => Ordering::Less,
            (_, None) => Ordering::Greater,
        },
        Delta::Same => Ordering::Equal,
    };
    (ord, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{generate_type_seq, Growth, SchemeTypeSeq, Step, DEFAULT_DOMAIN_CAP};

    #[test]
    fn profile_agrees_with_definitions_on_small_schemes() {
        let mut types = vec![SchemeTypeSeq::from_steps(&[
            Step { pieces: 2, root: 0 },
            Step { pieces: 4, root: 1 },
        ])
        .unwrap()];
        types.extend((0..6).map(|s| {
            generate_type_seq(1 + (s as usize % 3), Growth::Random(s), DEFAULT_DOMAIN_CAP).unwrap()
        }));
        for t in types {
            let s = Scheme::build(&t);
            let p = MetricProfile::new(&s).unwrap();
            for a in 0..s.domain() {
                let card: Vec<usize> = p.card_fn(a).iter().map(|&x| x as usize).collect();
                assert_eq!(card, s.card_fn(a).unwrap());
                let xi: Vec<i64> = p.xi_seq(a).iter().map(|&x| x as i64).collect();
                assert_eq!(xi, s.xi(a).unwrap());
                for k in 0..=s.rank() {
                    assert_eq!(p.closure(a, k), s.closure(a, k).unwrap().as_slice());
                }
                for b in 0..s.domain() {
                    assert_eq!(p.rho(a, b), s.rho(a, b).unwrap());
                }
            }
        }
    }

    #[test]
    fn delta_ordering_and_sentinel() {
        assert!(Delta::At(1000) < Delta::Same);
        assert!(Delta::At(1) < Delta::At(2));
        assert_eq!(seq_delta(&[0, 1, 2], &[0, 1, 2]), Delta::Same);
        assert_eq!(seq_delta(&[0, 1, 2], &[0, 2, 2]), Delta::At(1));
        assert_eq!(
            lex_by_delta(&[0, -1], &[0, 2]),
            (Ordering::Less, Delta::At(1))
        );
    }
}
