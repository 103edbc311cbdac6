use thiserror::Error;

use crate::stats::SummaryStats;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A loan contract field or combination of fields is out of range.
    #[error("invalid contract: {0}")]
    InvalidContract(String),

    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The balance residual never turned negative on the upper bracket scan.
    #[error("no root of the balance residual in (0, 1) after {halvings} halvings")]
    NoRootInUnitInterval { halvings: u32 },

    /// An expanding bracket search never changed sign.
    #[error("bracket search failed after {doublings} doublings (last upper bound {upper})")]
    BracketFailure { doublings: u32, upper: f64 },

    /// A repayment path length does not match the contract.
    #[error("path has {got} payments, contract expects {expected}")]
    PathLength { expected: usize, got: usize },

    #[error("sample is empty")]
    EmptySample,

    /// Zero variance: location statistics are still available, shape statistics are not.
    #[error("degenerate sample (zero variance, mean {})", .0.mean)]
    DegenerateSample(SummaryStats),
}
