//! Error types shared across the toolchain.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("empty graph: partitioning requires at least one vertex")]
    EmptyGraph,

    #[error("incompatible binary: {0}")]
    IncompatibleBinary(String),

    #[error("simulator deadlock: {0}")]
    SimDeadlock(String),

    #[error("simulator fault: {0}")]
    SimFault(String),

    #[error("WAR hazard assertion: {0}")]
    WarAssertion(String),

    #[error("compiler bug: {0}")]
    CompilerBug(String),

    #[error("oracle bug: {0}")]
    OracleBug(String),

    #[error("verification failure: {0}")]
    VerifyFailure(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 verification failure, 3 input error,
    /// 4 internal assertion.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::VerifyFailure(_) => 2,
            Error::MalformedGraph(_)
            | Error::InvalidModel(_)
            | Error::EmptyGraph
            | Error::IncompatibleBinary(_)
            | Error::Io(_) => 3,
            Error::SimDeadlock(_)
            | Error::SimFault(_)
            | Error::WarAssertion(_)
            | Error::CompilerBug(_)
            | Error::OracleBug(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
