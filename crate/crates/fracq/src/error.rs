//! Error types shared across the crate.

use thiserror::Error;

/// Validation and construction failures for measure specs.
#[derive(Debug, Clone, Error)]
pub enum MeasureError {
    #[error("row {row} of the transition matrix sums to {sum}, not 1")]
    NonStochasticMatrix { row: usize, sum: f64 },
    #[error("row {row} has {count} positive transitions; at least 2 are required")]
    DegenerateRow { row: usize, count: usize },
    #[error("separation violated ({context}): margin {margin}")]
    SeparationViolation { context: String, margin: f64 },
    #[error("contraction ratio {value} outside (0,1) at {context}")]
    RatioOutOfRange { context: String, value: f64 },
    #[error("probability vector invalid ({context}): {detail}")]
    ProbabilityInvalid { context: String, detail: String },
    #[error("invalid spec ({0})")]
    InvalidSpec(String),
    #[error("word is not admissible at position {position}")]
    InadmissibleWord { position: usize },
    #[error("threshold {eps} outside (0, {max}]")]
    ThresholdOutOfRange { eps: f64, max: f64 },
    #[error("threshold too small: partition would exceed depth cap {cap}")]
    ThresholdTooSmall { cap: usize },
    #[error("depth {depth} exceeds the configured cap {cap}")]
    DepthCapExceeded { depth: usize, cap: usize },
}

/// Failures of the implicit-equation solvers.
#[derive(Debug, Clone, Error)]
pub enum SolveError {
    #[error("no root bracketed in (0,1): f stays {side} 1")]
    NoRoot { side: &'static str },
    #[error("level cap exceeded: requested {requested}, available {available}")]
    LevelCapExceeded { requested: usize, available: usize },
    #[error("declared frequency vector inconsistent with the periodic tail: {detail}")]
    FrequencyMismatch { detail: String },
    #[error("power iteration did not converge within {cap} iterations")]
    PowerIterationStalled { cap: usize },
}

/// Failures of the quantizer front end.
#[derive(Debug, Clone, Error)]
pub enum QuantError {
    #[error("order r must be positive, got {0}")]
    InvalidOrder(f64),
    #[error("codebook size must be at least 1")]
    EmptyCodebook,
    #[error("sample cloud is empty")]
    EmptyCloud,
}

/// Failures of the bounds and analysis layers.
#[derive(Debug, Clone, Error)]
pub enum AnalysisError {
    #[error("curve contains a zero error at n={n}; measure is finitely supported at this resolution")]
    ZeroError { n: usize },
    #[error("need at least {needed} usable points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("need at least {needed} levels, got {got}")]
    InsufficientLevels { needed: usize, got: usize },
    #[error("report requires at least one artifact")]
    EmptyReport,
    #[error("curve is malformed: {0}")]
    MalformedCurve(String),
}
