use thiserror::Error;

/// Errors raised by the library.
///
/// Domain errors flag inputs outside an operation's mathematical domain;
/// budget errors flag inputs that are valid but exceed a configured cap.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation `{0}` is undefined for the zero polynomial")]
    ZeroPolynomial(&'static str),

    #[error("operation `{op}` needs degree >= {min}, got degree {got}")]
    DegreeTooLow {
        op: &'static str,
        min: usize,
        got: usize,
    },

    #[error("operation `{0}` is undefined for zero")]
    ZeroArgument(&'static str),

    #[error("operation `{op}` needs an argument >= 1, got {got}")]
    NonPositive { op: &'static str, got: String },

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("polynomial vanishes identically modulo {0}: every residue is a root")]
    AllResiduesRoots(String),

    #[error("{0} is not squarefree")]
    NotSquarefree(String),

    #[error("prime list is empty")]
    EmptyPrimeList,

    #[error("scan bound {bound} exceeds the configured cap {cap}")]
    ScanCapExceeded { bound: String, cap: u64 },

    #[error("enumeration of {size} polynomials exceeds the configured cap {cap}")]
    EnumerationCapExceeded { size: String, cap: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by a configured cap rather than by the input's domain.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::ScanCapExceeded { .. } | Error::EnumerationCapExceeded { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
