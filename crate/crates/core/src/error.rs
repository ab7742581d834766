use thiserror::Error;

/// Why the Euclidean factorizer refused a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorReject {
    /// Stripping the next letter would have produced a negative entry.
    Negative { step: usize },
    /// The identity was reached before the expected number of letters.
    EarlyIdentity { step: usize },
    /// After the expected number of letters the remainder is not the identity.
    NotIdentity,
}

/// Explicit decryption rejection, one code per detection point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reject {
    /// The unconjugated matrix is not block-scalar.
    BadBlock,
    /// Euclidean factorization failed.
    BadFactor(FactorReject),
    /// A generator-sized chunk matched neither secret generator.
    BadChunk { index: usize },
    /// Word length is not a multiple of the generator length.
    BadLength,
}

impl Reject {
    pub fn code(&self) -> &'static str {
        match self {
            Reject::BadBlock => "BadBlock",
            Reject::BadFactor(_) => "BadFactor",
            Reject::BadChunk { .. } => "BadChunk",
            Reject::BadLength => "BadLength",
        }
    }
}

impl std::fmt::Display for Reject {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Reject::BadFactor(FactorReject::Negative { step }) => {
                write!(f, "BadFactor (negative entry at step {step})")
            }
            Reject::BadFactor(FactorReject::EarlyIdentity { step }) => {
                write!(f, "BadFactor (identity reached at step {step})")
            }
            Reject::BadFactor(FactorReject::NotIdentity) => {
                write!(f, "BadFactor (remainder is not the identity)")
            }
            Reject::BadChunk { index } => write!(f, "BadChunk (chunk {index})"),
            other => f.write_str(other.code()),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("matrix is not invertible modulo 2^k")]
    NotInvertible,
    #[error("parse error at line {line}, field `{field}`: {msg}")]
    Parse {
        line: usize,
        field: String,
        msg: String,
    },
    #[error("rejected: {0}")]
    Reject(Reject),
    #[error("no consistent conjugator found")]
    NoSolution,
    #[error("sampler exhausted after {attempts} attempts")]
    Exhausted { attempts: u64 },
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn parse(line: usize, field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            field: field.into(),
            msg: msg.into(),
        }
    }
}

impl From<Reject> for Error {
    fn from(r: Reject) -> Self {
        Error::Reject(r)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
