use thiserror::Error;

/// Errors raised by the library. Each variant maps onto a CLI exit code.
#[derive(Debug, Error)]
pub enum Error {
    /// Elements or polynomials that do not belong to the same group.
    #[error("group mismatch: {0}")]
    SpecMismatch(String),

    /// A mathematical precondition does not hold.
    #[error("{0}")]
    Domain(String),

    /// A set failed an independence precondition; `relation` is the witness.
    #[error("set is not {degree}-degree independent: relation {relation}")]
    NotIndependent { degree: u32, relation: String },

    /// Parameters that would make a computation meaningless.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A configured work or size cap would be exceeded.
    #[error("{what}: estimated {estimate} exceeds the configured cap of {cap}")]
    Resource { what: String, cap: u64, estimate: u64 },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn resource(what: impl Into<String>, cap: u64, estimate: u64) -> Self {
        Error::Resource {
            what: what.into(),
            cap,
            estimate,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SpecMismatch(_)
            | Error::Domain(_)
            | Error::NotIndependent { .. }
            | Error::Config(_) => 2,
            Error::Resource { .. } => 3,
            Error::Parse(_) | Error::Io(_) => 4,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
