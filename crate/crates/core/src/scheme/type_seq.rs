use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, TypeAxiom, TypeAxiomViolation};

/// Largest domain the generators will produce unless told otherwise.
pub const DEFAULT_DOMAIN_CAP: usize = 20_000;

/// One splitting step: a level of size `m_k` becomes a level of size
/// `root + (m_k - root) * pieces`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub pieces: usize,
    pub root: usize,
}

/// A validated finite scheme type `<m_k, n_{k+1}, r_{k+1}>_{k<K}` together
/// with the top size `m_K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SchemeTypeSeq {
    sizes: Vec<usize>,
    steps: Vec<Step>,
}

impl SchemeTypeSeq {
    /// Derive the level sizes from splitting steps via the size recursion.
    pub fn from_steps(steps: &[Step]) -> Result<Self> {
        Self::from_steps_capped(steps, usize::MAX)
    }

    pub fn from_steps_capped(steps: &[Step], cap: usize) -> Result<Self> {
        let mut sizes = vec![1usize];
        let mut violations = Vec::new();
        for (k, s) in steps.iter().enumerate() {
            let m = sizes[k];
            if s.pieces < 2 {
                violations.push(TypeAxiomViolation {
                    k,
                    axiom: TypeAxiom::B,
                    detail: format!("n_{} = {} < 2", k + 1, s.pieces),
                });
            }
            if s.root >= m {
                violations.push(TypeAxiomViolation {
                    k,
                    axiom: TypeAxiom::C,
                    detail: format!("r_{} = {} >= m_{k} = {m}", k + 1, s.root),
                });
            }
            if !violations.is_empty() {
                continue;
            }
            let next = next_size(m, *s);
            if next > cap as u128 {
                return Err(Error::Overflow { size: next, cap });
            }
            sizes.push(next as usize);
        }
        if !violations.is_empty() {
            return Err(Error::AxiomViolation(violations));
        }
        Ok(SchemeTypeSeq {
            sizes,
            steps: steps.to_vec(),
        })
    }

    /// Validate explicit triples `(m_k, n_{k+1}, r_{k+1})`, optionally with the
    /// top size `m_K`. Every violated axiom is reported.
    pub fn from_entries(entries: &[[usize; 3]], top: Option<usize>) -> Result<Self> {
        let mut violations = Vec::new();
        let check_d = |k: usize,
                       m: usize,
                       step: Step,
                       next: usize,
                       violations: &mut Vec<TypeAxiomViolation>| {
            if step.root < m && next_size(m, step) != next as u128 {
                violations.push(TypeAxiomViolation {
                    k,
                    axiom: TypeAxiom::D,
                    detail: format!(
                        "m_{} = {next} but r + (m - r) n = {}",
                        k + 1,
                        next_size(m, step)
                    ),
                });
            }
        };
        match entries.first() {
            Some(e) if e[0] != 1 => violations.push(TypeAxiomViolation {
                k: 0,
                axiom: TypeAxiom::A,
                detail: format!("m_0 = {} != 1", e[0]),
            }),
            None if top.is_some_and(|t| t != 1) => violations.push(TypeAxiomViolation {
                k: 0,
                axiom: TypeAxiom::A,
                detail: format!("m_0 = {} != 1", top.unwrap_or(0)),
            }),
            _ => {}
        }
        for (k, e) in entries.iter().enumerate() {
            let [m, n, r] = *e;
            let step = Step { pieces: n, root: r };
            if n < 2 {
                violations.push(TypeAxiomViolation {
                    k,
                    axiom: TypeAxiom::B,
                    detail: format!("n_{} = {n} < 2", k + 1),
                });
            }
            if r >= m {
                violations.push(TypeAxiomViolation {
                    k,
                    axiom: TypeAxiom::C,
                    detail: format!("r_{} = {r} >= m_{k} = {m}", k + 1),
                });
            }
            let next = entries
                .get(k + 1)
                .map(|x| x[0])
                .or(if k + 1 == entries.len() { top } else { None });
            if let Some(next) = next {
                check_d(k, m, step, next, &mut violations);
            }
        }
        if !violations.is_empty() {
            return Err(Error::AxiomViolation(violations));
        }
        let steps: Vec<Step> = entries
            .iter()
            .map(|e| Step {
                pieces: e[1],
                root: e[2],
            })
            .collect();
        Self::from_steps(&steps)
    }

    pub fn rank(&self) -> usize {
        self.steps.len()
    }

    /// `m_k`, the size of every level-`k` set.
    pub fn level_size(&self, k: usize) -> usize {
        self.sizes[k]
    }

    /// `m_K`, the size of the domain of a single-top scheme.
    pub fn top_size(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    /// `n_k` for `1 <= k <= K`: how many pieces a level-`k` set splits into.
    pub fn pieces(&self, k: usize) -> usize {
        self.steps[k - 1].pieces
    }

    /// `r_k` for `1 <= k <= K`: root size of the canonical decomposition.
    pub fn root_size(&self, k: usize) -> usize {
        self.steps[k - 1].root
    }

    /// `m_{k-1} - r_k`, the size of each tail of a level-`k` decomposition.
    pub fn tail_size(&self, k: usize) -> usize {
        self.sizes[k - 1] - self.steps[k - 1].root
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Triples `[m_k, n_{k+1}, r_{k+1}]` for `k < K`.
    pub fn entries(&self) -> Vec<[usize; 3]> {
        self.steps
            .iter()
            .enumerate()
            .map(|(k, s)| [self.sizes[k], s.pieces, s.root])
            .collect()
    }
}

fn next_size(m: usize, s: Step) -> u128 {
    s.root as u128 + (m as u128 - s.root as u128) * s.pieces as u128
}

/// How [`generate_type_seq`] grows the levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    /// Smallest next level: two pieces over the largest possible root.
    Minimal,
    /// Wide enough for the arity-`n` subset enumeration at every level, with
    /// tails of `min(m_k, 2n + 1)` points.
    Coding(usize),
    /// Like `Coding` with tails of `min(m_k, tail)` points. Interval
    /// families of width `tail` then line up with the top-level blocks.
    CodingTail { n: usize, tail: usize },
    /// Like `Coding`, and additionally `n_{k+1} >= 2^{m_k}`. Only feasible
    /// for very small ranks.
    CodingStrict(usize),
    /// Seeded random steps with `2 <= n_{k+1} <= 6`.
    Random(u64),
    /// Seeded random tails of at most `2n + 2` points, with the arity-`n`
    /// enumeration width plus up to two spare pieces.
    RandomCoding { n: usize, seed: u64 },
}

/// Number of subsets of size at most `n` of a `t`-element set.
pub fn subsets_up_to(t: usize, n: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for s in 0..=n.min(t) {
        total += binom;
        binom = binom * (t - s) as u128 / (s as u128 + 1);
    }
    total
}

pub fn generate_type_seq(rank: usize, growth: Growth, cap: usize) -> Result<SchemeTypeSeq> {
    if rank == 0 {
        return Err(Error::Precondition("rank must be at least 1".into()));
    }
    let mut rng = match growth {
        Growth::Random(seed) | Growth::RandomCoding { seed, .. } => {
            Some(ChaCha8Rng::seed_from_u64(seed))
        }
        _ => None,
    };
    let mut m = 1usize;
    let mut steps = Vec::with_capacity(rank);
    for _ in 0..rank {
        let step = match growth {
            Growth::Minimal => Step {
                pieces: 2,
                root: m - 1,
            },
            Growth::Coding(n) | Growth::CodingStrict(n) | Growth::CodingTail { n, .. } => {
                if n == 0 {
                    return Err(Error::Precondition(
                        "coding arity must be at least 1".into(),
                    ));
                }
                let tail = match growth {
                    Growth::CodingTail { tail: 0, .. } => {
                        return Err(Error::Precondition("tail width must be at least 1".into()))
                    }
                    Growth::CodingTail { tail, .. } => m.min(tail),
                    _ => m.min(2 * n + 1),
                };
                let mut width = subsets_up_to(tail, n) + 1;
                if matches!(growth, Growth::CodingStrict(_)) {
                    let pow = if m >= 127 { u128::MAX } else { 1u128 << m };
                    width = width.max(pow);
                }
                if width > cap as u128 {
                    return Err(Error::Overflow { size: width, cap });
                }
                Step {
                    pieces: width as usize,
                    root: m - tail,
                }
            }
            Growth::Random(_) => {
                let rng = rng.as_mut().unwrap();
                Step {
                    pieces: rng.gen_range(2..=6),
                    root: rng.gen_range(0..m),
                }
            }
            Growth::RandomCoding { n, .. } => {
                if n == 0 {
                    return Err(Error::Precondition(
                        "coding arity must be at least 1".into(),
                    ));
                }
                let rng = rng.as_mut().unwrap();
                let tail = rng.gen_range(1..=m.min(2 * n + 2));
                let width = subsets_up_to(tail, n) + 1 + rng.gen_range(0..=2u128);
                if width > cap as u128 {
                    return Err(Error::Overflow { size: width, cap });
                }
                Step {
                    pieces: width as usize,
                    root: m - tail,
                }
            }
        };
        let next = next_size(m, step);
        if next > cap as u128 {
            return Err(Error::Overflow { size: next, cap });
        }
        m = next as usize;
        steps.push(step);
    }
    SchemeTypeSeq::from_steps_capped(&steps, cap)
}
