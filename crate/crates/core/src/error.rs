use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("integrand is not finite at node {node:e}")]
    NonFinite { node: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("angular frequency {omega:e} rad/s is outside the tabulated support [{min:e}, {max:e}] rad/s")]
    OutOfRange { omega: f64, min: f64, max: f64 },

    #[error("polarizability pole: 1 + L(eps - 1) vanishes along axis {axis} (eps = {eps_re} + {eps_im}i)")]
    Pole { axis: usize, eps_re: f64, eps_im: f64 },

    #[error("singular evaluation: {0}")]
    Singular(String),

    #[error("degenerate direction: {0}")]
    DegenerateDirection(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("exponential fit rejected: rms residual {residual:e} exceeds {threshold:e}")]
    FitQuality { residual: f64, threshold: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
