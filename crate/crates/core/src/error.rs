use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Fewer surviving codeword components than the code dimension.
    #[error("insufficient data: need {needed} surviving symbols, have {available}")]
    InsufficientData { needed: usize, available: usize },

    /// Surviving components do not lie on a single polynomial of the
    /// declared dimension.
    #[error("corrupt codeword: survivors are inconsistent with a dimension-{dimension} code")]
    CorruptCodeword { dimension: usize },

    /// A rate vector cannot be carried by the configured frames.
    #[error("rate infeasible: {0}")]
    RateInfeasible(String),

    /// Decoding failed on a link during simulation.
    #[error(
        "rate infeasible on link {from}->{to} (frame {frame}): need {needed} packets, received {available}"
    )]
    LinkInfeasible {
        from: usize,
        to: usize,
        frame: i64,
        needed: usize,
        available: usize,
    },

    #[error("inconsistent observation: {0}")]
    InconsistentObservation(String),

    #[error("offset discovery failed: {0}")]
    DiscoveryFailed(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
