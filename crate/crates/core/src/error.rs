use thiserror::Error;

/// Errors raised by the numerical and statistical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge within {terms} terms (last term {last_term:e})")]
    SeriesConvergence { terms: usize, last_term: f64 },

    #[error("quadrature did not reach tolerance after {subdivisions} subdivisions (error estimate {estimate:e})")]
    Quadrature { subdivisions: usize, estimate: f64 },

    #[error("explicit scheme unstable: mu = {mu} exceeds beta = {beta}")]
    StabilityViolation { mu: f64, beta: f64 },

    #[error("negative density {value:e} at node {node}, step {step}")]
    NegativeDensity { node: usize, step: usize, value: f64 },

    #[error("singular covariance: {0}")]
    SingularCovariance(String),

    #[error("cholesky factorization failed after jitter {jitter:e}")]
    Factorization { jitter: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
