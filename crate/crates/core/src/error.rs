use core::fmt;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operand lengths or shapes do not line up.
    DimensionMismatch { expected: usize, found: usize },
    /// An index (evaluation point, variable, coordinate) is outside its range.
    IndexOutOfRange { index: usize, bound: usize },
    /// The known coordinates or channel output agree with no codeword.
    Inconsistent,
    /// An exhaustive enumeration was requested above its dimension guard.
    GuardExceeded { dim: usize, guard: usize },
    /// A real or integer parameter is outside its admissible range.
    InvalidParameter(&'static str),
    /// An iterative root finder did not reach its tolerance.
    NoConvergence,
    /// Every codeword has zero likelihood under the observed output.
    ZeroLikelihood,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::IndexOutOfRange { index, bound } => {
                write!(f, "index {index} out of range (bound {bound})")
            }
            Error::Inconsistent => f.write_str("observation is consistent with no codeword"),
            Error::GuardExceeded { dim, guard } => write!(
                f,
                "dimension {dim} exceeds the exhaustive enumeration guard of {guard}"
            ),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::NoConvergence => f.write_str("root finder did not converge"),
            Error::ZeroLikelihood => f.write_str("all codewords have zero likelihood"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
