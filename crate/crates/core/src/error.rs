use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Variants fall into three families that the CLI maps onto distinct exit
/// codes: invalid input, computational limits, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: at least one entry is required")]
    EmptyInput,
    #[error("entry {index} is {value}; all entries must be positive")]
    NonPositive { index: usize, value: i128 },
    #[error("entries have common divisor {gcd}; the instance must be primitive")]
    NonPrimitive { gcd: i128 },
    #[error("dimension {n} is too small; at least two entries are required")]
    DimensionTooSmall { n: usize },
    #[error("multiplicity {s} is invalid; s must be at least 1")]
    InvalidMultiplicity { s: i128 },
    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("arithmetic overflow while computing {0}")]
    ArithmeticOverflow(&'static str),
    #[error("{what} needs {requested} units, budget is {budget}")]
    ResourceLimit {
        what: &'static str,
        requested: u128,
        budget: u128,
    },
    #[error("search bound {bound} was too small for residue {residue}")]
    InternalBoundViolation { residue: i128, bound: i128 },
    #[error("sampler made no progress after {attempts} attempts at sample {index}")]
    SamplerStuck { index: u64, attempts: u64 },
    #[error("sample {index} failed: {source}")]
    Sample {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Compute,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::EmptyInput
            | Error::NonPositive { .. }
            | Error::NonPrimitive { .. }
            | Error::DimensionTooSmall { .. }
            | Error::InvalidMultiplicity { .. }
            | Error::DimensionMismatch { .. }
            | Error::InvalidConfig(_) => ErrorKind::Input,
            Error::ArithmeticOverflow(_)
            | Error::ResourceLimit { .. }
            | Error::InternalBoundViolation { .. }
            | Error::SamplerStuck { .. } => ErrorKind::Compute,
            Error::Sample { source, .. } => source.kind(),
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => ErrorKind::Io,
        }
    }
}
