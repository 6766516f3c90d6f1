use thiserror::Error;

/// Errors raised across the coding, decoding and simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid code definition: {0}")]
    InvalidSpec(String),

    #[error("input too short: need at least {needed} bits, got {got}")]
    InputTooShort { needed: usize, got: usize },

    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("configuration error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("problem too large for brute force: {0}")]
    TooLarge(String),

    #[error("unknown registry id `{0}`")]
    UnknownId(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
