use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter lists differ in length: {masses} masses, {stiffnesses} stiffnesses, {dampers} dampers")]
    LengthMismatch {
        masses: usize,
        stiffnesses: usize,
        dampers: usize,
    },

    #[error("{name}[{index}] = {value} is not admissible")]
    NonPositiveParameter {
        name: &'static str,
        index: usize,
        value: f64,
    },

    #[error("{what} index {index} out of range 1..={len}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("(iωI - A) is singular at ω = {omega}")]
    SingularSystem { omega: f64 },

    #[error("evaluation at a pole of the fractional model (ω = {omega})")]
    PoleHit { omega: f64 },

    #[error("fractional dynamic stiffness matrix is singular at ω = {omega}")]
    SingularDynamicStiffness { omega: f64 },

    #[error("transfer function vanishes at ω = {omega}")]
    Antiresonance { omega: f64 },

    #[error("logarithm argument is zero at ω = {omega}")]
    DegenerateArgument { omega: f64 },

    #[error("solver did not converge at ω = {omega} (residual {residual:e})")]
    NoConvergence { omega: f64, residual: f64 },

    #[error("invalid mass partition: {0}")]
    PartitionMismatch(String),

    #[error("datasets disagree on the frequency grid: {0}")]
    GridMismatch(String),

    #[error("ill-conditioned second-order fit: {0}")]
    IllConditionedFit(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular matrix (pivot {pivot} below threshold)")]
    Singular { pivot: usize },

    #[error("time step {dt} exceeds stability limit {limit}")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("sine fit is rank deficient: {0}")]
    RankDeficient(String),

    #[error("undamped oscillator driven at resonance ω = {omega}")]
    UnboundedResponse { omega: f64 },

    #[error("nothing to plot")]
    EmptySeries,

    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
