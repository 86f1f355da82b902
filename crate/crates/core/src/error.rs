use thiserror::Error;

/// Errors raised by the walk engines and the analysis helpers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    /// Amplitude reached one of the two outermost sites of a guarded lattice.
    #[error("amplitude reached guarded boundary site x = {site} (probability {probability:e})")]
    BoundaryViolation { site: i64, probability: f64 },

    /// The resource projection of a post-selected step annihilated the state.
    #[error("post-selection onto the resource state has zero probability ({probability:e})")]
    PostSelectZeroProbability { probability: f64 },

    #[error("lattice mismatch: {left} vs {right}")]
    LatticeMismatch { left: String, right: String },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T, E = WalkError> = std::result::Result<T, E>;
