use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed structure: {0}")]
    MalformedStructure(String),

    #[error("size limit exceeded: {what} is {size}, limit {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("not a character: {0}")]
    NotACharacter(String),

    #[error("base is not algebraically closed: {0}")]
    BaseNotAclClosed(String),

    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("class {0} has algebraicity; the back-and-forth tree needs a relational class without it")]
    NoAlgebraicityRequired(String),

    #[error("distribution support leaves the enumeration prefix: {0}")]
    SupportOutsideEnumeration(String),

    #[error("Magnus expansions agree up to degree {degree}; raise the truncation degree")]
    UndecidedComparison { degree: usize },

    #[error("free action violated: {0}")]
    FreenessViolation(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn limit(what: &'static str, size: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::SizeLimitExceeded {
            what,
            size: size.into(),
            limit: limit.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SizeLimitExceeded { .. } | Error::TruncationTooSmall(_) => 2,
            Error::FreenessViolation(_) | Error::InvariantViolation(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
