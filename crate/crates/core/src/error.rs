use thiserror::Error;

/// Errors reported by the library.
///
/// `InvalidParameter`, `OutOfDomain` and `Precondition` are caller mistakes
/// (CLI exit code 2); `Numerical` signals a runtime failure such as series
/// truncation running out of terms (CLI exit code 3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Numerical(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
