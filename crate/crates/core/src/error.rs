use thiserror::Error;

/// Errors raised by kernel construction, transforms, geometry and approximation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parameters exceed the exact-arithmetic guard: {0}")]
    GuardExceeded(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("derivative of order {order} not available ({reason})")]
    UnsupportedOrder { order: usize, reason: String },

    #[error("quadrature did not converge: achieved error estimate {achieved:e} > tolerance {tolerance:e}")]
    QuadratureNonConvergence { achieved: f64, tolerance: f64 },

    #[error("amplitude calibration failed for d={d}, k={k}: relative residual {residual:e} at r={radius}")]
    CalibrationFailure {
        d: usize,
        k: usize,
        radius: f64,
        residual: f64,
    },

    #[error("duplicate point at index {0} and {1}")]
    DuplicatePoint(usize, usize),

    #[error("empty local star at anchor {anchor:?} (radius {radius}); enlarge C3")]
    EmptyStar { anchor: Vec<f64>, radius: f64 },

    #[error("polynomial reproduction not solvable at t={t:?}: star of {star_size} points has rank {rank} < {needed}")]
    Unisolvent {
        t: Vec<f64>,
        star_size: usize,
        rank: usize,
        needed: usize,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("need at least {needed} usable levels for a rate fit, got {got}")]
    InsufficientLevels { needed: usize, got: usize },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
