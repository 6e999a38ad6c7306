use thiserror::Error;

/// Errors raised by the analyses.
///
/// Each variant maps onto one of the command-line exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal consistency alarm: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// Process exit code: 1 assertion/consistency failure, 2 input error, 3 resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Precondition(_) => 2,
            Error::Resource(_) => 3,
            Error::Internal(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
