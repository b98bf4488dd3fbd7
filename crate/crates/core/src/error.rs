use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coordinate count {n} exceeds the exact-representation cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("conditioning event has zero mass")]
    ConditionOnNull,

    #[error("rank {k} has zero mass")]
    RankOnNull { k: usize },

    #[error("measure is not normalized: total mass {total}")]
    NotNormalized { total: f64 },

    #[error("negative mass {mass} at configuration index {index}")]
    NegativeMass { index: usize, mass: f64 },

    #[error("empty coordinate subset")]
    EmptySubset,

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("graph is not connected")]
    DisconnectedGraph,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("matrix is not Hermitian: max asymmetry {max_dev}")]
    NotHermitian { max_dev: f64 },

    #[error("kernel eigenvalue {value} at position {index} outside [0,1]")]
    SpectrumOutOfRange { index: usize, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver failure: {0}")]
    Eigensolver(String),

    #[error("zero polynomial has no root set")]
    ZeroPolynomial,

    #[error("degenerate coefficient draw: all coefficients below tolerance")]
    DegenerateCoefficients,

    #[error("hyperbolic metric requires |z| < 1, got |z| = {modulus}")]
    OutsideUnitDisk { modulus: f64 },

    #[error("no built-in Lipschitz constant for this radius/metric; supply one explicitly")]
    MissingLipschitzConstant,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
