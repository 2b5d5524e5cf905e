//! Brute-force ground truth for the rank-one models: p-adic matrices, Hecke
//! actions by coset enumeration and `K^1`-orbit counts.

pub mod compare;
pub mod factor;
pub mod model;
pub mod padic;

use thiserror::Error;

use tamenorm_core::coeffs::Point;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("point is not in the open orbit: {0}")]
    BoundaryPoint(String),
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("prime {0} is not supported (use 2, 3, 5 or 7)")]
    BadPrime(u64),
    #[error("coweight {0:?} is not dominant")]
    NotDominant(Point),
    #[error("specialized operator is not a combination of double-coset indicators")]
    NotInvariant,
    #[error("bad point: {0}")]
    BadPoint(String),
    #[error("{0}")]
    Core(String),
}

pub use compare::{compare_with_symbolic, ComparisonReport, GradedOperator};
pub use model::RankOneModel;
