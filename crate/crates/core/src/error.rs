use thiserror::Error;

/// Errors raised by the measure, engine, geometry and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum VoiError {
    #[error("degenerate measure: weights sum to zero")]
    DegenerateMeasure,

    #[error("row {row} has zero mass and cannot be normalized")]
    ZeroRow { row: usize },

    #[error("weight {index} is invalid ({value}); weights must be finite and nonnegative")]
    InvalidWeight { index: usize, value: f64 },

    #[error("probability vector sums to {sum}, expected 1 within 1e-12")]
    NotNormalized { sum: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid number of points n = {n}: {reason}")]
    InvalidSize { n: usize, reason: &'static str },

    #[error("invalid cost entry at ({row}, {col}): {value}")]
    InvalidCost { row: usize, col: usize, value: f64 },

    #[error("beta = {beta} is out of range: {reason}")]
    BetaOutOfRange { beta: f64, reason: String },

    #[error("invalid beta grid: {0}")]
    InvalidGrid(String),

    #[error("sign-convention violation: beta*Gamma' - Gamma = {info} < 0")]
    SignConvention { info: f64 },

    #[error("no closed form for family {family}; use generic path")]
    NoClosedForm { family: &'static str },

    #[error("family {family} has no Hartley partition semantics")]
    NoHartley { family: &'static str },

    #[error("n must be a power-of-two multiple of cells (n = {n}, cells = {cells})")]
    HartleyCells { n: usize, cells: usize },

    #[error("information target {target} nats is unreachable (supremum {supremum} nats)")]
    UnreachableInfo { target: f64, supremum: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = VoiError> = std::result::Result<T, E>;
