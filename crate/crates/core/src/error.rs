use thiserror::Error;

/// Errors raised by the library surface.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input vector data failed a consistency check (e.g. not divergence-free).
    #[error("inconsistent input: {norm} = {value:.3e} exceeds tolerance {tol:.3e}")]
    Inconsistent {
        norm: &'static str,
        value: f64,
        tol: f64,
    },

    /// The positive set {phi > phi_inf} is empty, so the multiplier is undefined.
    #[error("degenerate support: the set {{phi > phi_inf}} is empty")]
    DegenerateSupport,

    #[error("linear solver did not converge (relative residual {residual:.3e})")]
    SolverNonConvergence { residual: f64 },

    #[error("time step {dt:.3e} violates the stability limit {limit:.3e}")]
    Cfl { dt: f64, limit: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
