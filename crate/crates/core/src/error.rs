use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inconsistent or unsupported configuration (grid sizes, config keys, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// A quadrature or iteration failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// The trajectory became non-finite or exceeded the blow-up ceiling.
    #[error("blow-up detected at t = {time}")]
    BlowUp { time: f64 },

    /// Picard iteration stopped contracting on the requested horizon.
    #[error("mild map does not contract on horizon T = {horizon} (distance grew for 3 iterations)")]
    NonContraction { horizon: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
