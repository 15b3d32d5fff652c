use std::fmt;

use thiserror::Error;

/// Which scheme-type axiom a sequence breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum TypeAxiom {
    /// The bottom level has exactly one point.
    A,
    /// Every level splits into at least two pieces.
    B,
    /// The root is strictly smaller than the level it is cut from.
    C,
    /// Level sizes follow the root-plus-tails recursion.
    D,
}

impl fmt::Display for TypeAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TypeAxiom::A => "(a)",
            TypeAxiom::B => "(b)",
            TypeAxiom::C => "(c)",
            TypeAxiom::D => "(d)",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TypeAxiomViolation {
    pub k: usize,
    pub axiom: TypeAxiom,
    pub detail: String,
}

impl fmt::Display for TypeAxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "axiom {} at k={}: {}", self.axiom, self.k, self.detail)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("tuples share the point {0}")]
    NotDisjoint(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("tuple is not strictly increasing")]
    NotIncreasing,
    #[error("invalid open box: {0}")]
    InvalidBox(String),
    #[error("type sequence violates {}", join(.0))]
    AxiomViolation(Vec<TypeAxiomViolation>),
    #[error("domain size {size} exceeds the cap {cap}")]
    Overflow { size: u128, cap: usize },
    #[error("ordinal {ordinal} is outside the domain [0, {domain})")]
    OutOfDomain { ordinal: usize, domain: usize },
    #[error("level {level} is outside 0..={rank}")]
    LevelOutOfRange { level: usize, rank: usize },
    #[error("ill-formed scheme: {0}")]
    IllFormedScheme(String),
    #[error("level {level}: need {needed} enumeration slots but only {available} available")]
    InsufficientWidth {
        level: usize,
        needed: usize,
        available: usize,
    },
    #[error("coded points of different kinds or arities cannot be compared")]
    KindMismatch,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join(v: &[TypeAxiomViolation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
