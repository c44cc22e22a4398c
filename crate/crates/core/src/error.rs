use thiserror::Error;

pub type Result<T, E = SubdivError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SubdivError {
    #[error("insufficient data: need at least {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("boundary policy {policy} is not valid for {topology} topology")]
    PolicyMismatch {
        policy: &'static str,
        topology: &'static str,
    },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid mask: {0}")]
    InvalidMask(String),

    #[error("invalid function space: {0}")]
    InvalidSpace(String),

    #[error("tension parameter cannot be deduced from the data (f_i == f_(i+1))")]
    IndeterminatePhi,

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The stationary square-root rule is undefined for the window starting
    /// at coarse index `index` (relative to the stored values).
    #[error("rule undefined at coarse index {index}: {reason}")]
    RuleDomain { index: usize, reason: &'static str },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("map evaluation failed at {0:?}")]
    EvaluationFailure(Vec<f64>),

    #[error("tabulated grid mismatch at abscissa {0}")]
    GridMismatch(f64),

    #[error("sequence exhausted by truncation at level {level}")]
    Exhausted { level: u32 },

    #[error("degenerate window: {0}")]
    Degenerate(String),
}
