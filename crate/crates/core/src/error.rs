use thiserror::Error;

use crate::oracle::TruncationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A configuration field is outside its admissible range.
    #[error("{field} {bound}")]
    InvalidConfig { field: &'static str, bound: String },

    #[error("weak value is singular: n*phi = {n_phi} is a multiple of pi")]
    SingularWeakValue { n_phi: f64 },

    #[error("recycling cavity diverges: r*L*cos(n*phi -/+ n*g) = {gain} >= 1")]
    DivergentCavity { gain: f64 },

    /// A guarded singularity of a closed-form expression.
    #[error("{quantity} is undefined: {reason}")]
    Singular {
        quantity: &'static str,
        reason: &'static str,
    },

    #[error("pointer shift {0} lies outside [-1, 1]")]
    InvalidShift(f64),

    #[error("n = {n} exceeds the dense simulation cap of {max} qubits")]
    Capacity { n: u32, max: u32 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error(
        "recycling sum did not converge after {} passes (tail norm {:e})",
        .0.passes_used,
        .0.tail_norm
    )]
    Convergence(TruncationReport),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("no interior maximum in bracket [{lo}, {hi}]")]
    NoInteriorMaximum { lo: f64, hi: f64 },

    #[error("all outcome masses are zero")]
    AllMassesZero,
}

impl Error {
    pub(crate) fn singular(quantity: &'static str, reason: &'static str) -> Self {
        Error::Singular { quantity, reason }
    }

    /// Short machine-readable reason, used for status columns.
    pub fn reason(&self) -> String {
        match self {
            Error::Singular { reason, .. } => (*reason).to_string(),
            Error::SingularWeakValue { .. } => "singular weak value".to_string(),
            Error::DivergentCavity { .. } => "divergent cavity".to_string(),
            Error::InvalidShift(_) => "shift outside [-1,1]".to_string(),
            Error::AllMassesZero => "all outcome masses zero".to_string(),
            other => other.to_string(),
        }
    }
}
