use thiserror::Error;

/// Errors raised by the library. Verification failures are not errors; they
/// are reported as data on the certificate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("argument outside the function domain: {0}")]
    Domain(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    /// A construction that the underlying geometric argument says always
    /// succeeds could not be completed. Treated as a bug signal.
    #[error("construction failed on labeling {labeling:#x}: {reason}")]
    Construction { labeling: u64, reason: String },

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
