//! A desk-scale laboratory for finite construction schemes.
//!
//! * [`types`]: configuration types of pairs of increasing tuples and the
//!   open boxes witnessing them.
//! * [`scheme`]: scheme types, the single-top scheme builder, `rho`,
//!   closures, cardinality functions, `Delta`, `Xi`, and their verifiers.
//! * [`capture`]: root-tail-tail Δ-systems and (Δ-)captured families.
//! * [`coding`]: the integer-sequence codings `e`, `o` and `Xi` ordered
//!   lexicographically by `Delta`.
//! * [`analyzer`]: type spectra and finite realization / avoidance /
//!   increasing-set checks on coded families.

pub mod analyzer;
pub mod capture;
pub mod coding;
pub mod error;
mod par;
pub mod report;
pub mod scheme;
pub mod types;

pub use error::{Error, Result};
pub use scheme::{MetricProfile, Scheme, SchemeTypeSeq};
