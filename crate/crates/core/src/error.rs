use thiserror::Error;

use crate::discrete::Var;

/// Errors produced by region evaluation, sweeps and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A covariance block required by an entropy term is singular, or a
    /// mutual information term diverges. The parameter point is skipped.
    #[error("degenerate Gaussian term `{term}`")]
    Degenerate { term: &'static str },

    #[error("factor `{factor}` is not normalized at slice {slice}: mass {mass}")]
    Normalization {
        factor: String,
        slice: String,
        mass: f64,
    },

    #[error("factor `{factor}` has a negative or non-finite entry {value}")]
    NegativeMass { factor: String, value: f64 },

    #[error("factor `{factor}` does not match the {family} factorization: {reason}")]
    FactorShape {
        factor: String,
        family: &'static str,
        reason: String,
    },

    #[error("joint table needs {cells} cells, cap is {cap}")]
    CapExceeded { cells: u128, cap: u64 },

    #[error("axis error: {0}")]
    Axis(String),

    #[error("variable {0:?} is not an axis of the joint distribution")]
    UnknownAxis(Var),

    #[error("region is empty (infeasible)")]
    EmptyRegion,

    #[error("no feasible region in the union")]
    EmptyUnion,

    #[error("frontier grids differ: step {0} vs {1}")]
    GridMismatch(f64, f64),

    #[error("covariance matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("objective is not finite at {0}")]
    NonFiniteObjective(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
