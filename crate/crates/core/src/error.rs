use alloc::string::String;
use core::fmt;

use crate::lc::ParseError;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Inversion or division by an element with no nonzero retained term.
    ZeroDivision,
    /// The standard part was requested for an infinite element.
    NotNearStandard,
    /// An LP whose dimensions do not agree.
    MalformedProblem(String),
    /// A state, observation or action index outside the problem.
    IndexOutOfRange { what: &'static str, index: usize, len: usize },
    /// A prior whose support does not match the problem's states.
    SupportMismatch { expected: usize, found: usize },
    /// Mixture weights that are negative or do not sum to one.
    WeightError(String),
    /// Derandomization needs numeric values on the actions.
    NoEmbedding,
    /// Two objects that should have the same shape do not.
    ShapeMismatch(String),
    /// A decision problem violating its invariants.
    InvalidProblem(String),
    /// A procedure that is not row-stochastic or has out-of-range actions.
    InvalidProcedure(String),
    /// Prior weights that are negative or do not sum to one.
    InvalidPrior(String),
    /// An LP answer failed independent re-verification.
    CertificateFailure(String),
    /// A scale parameter that was expected to be infinite is not.
    NotInfinite,
    /// A regularity probe with a nonpositive radius or wrong dimension.
    BadProbe(String),
    /// A parameter point outside the family's parameter space.
    ParameterOutOfDomain(String),
    /// The requested combination of family and prior is not available.
    Unsupported(String),
    Parse(ParseError),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroDivision => write!(f, "division by zero"),
            Error::NotNearStandard => write!(f, "element is infinite and has no standard part"),
            Error::MalformedProblem(m) => write!(f, "malformed linear program: {m}"),
            Error::IndexOutOfRange { what, index, len } => {
                write!(f, "{what} index {index} out of range (len {len})")
            }
            Error::SupportMismatch { expected, found } => {
                write!(f, "prior has {found} weights but the problem has {expected} states")
            }
            Error::WeightError(m) => write!(f, "bad mixture weights: {m}"),
            Error::NoEmbedding => write!(f, "actions carry no numeric embedding"),
            Error::ShapeMismatch(m) => write!(f, "shape mismatch: {m}"),
            Error::InvalidProblem(m) => write!(f, "invalid decision problem: {m}"),
            Error::InvalidProcedure(m) => write!(f, "invalid procedure: {m}"),
            Error::InvalidPrior(m) => write!(f, "invalid prior: {m}"),
            Error::CertificateFailure(m) => write!(f, "LP certificate rejected: {m}"),
            Error::NotInfinite => write!(f, "scale parameter must be infinite (negative valuation)"),
            Error::BadProbe(m) => write!(f, "bad regularity probe: {m}"),
            Error::ParameterOutOfDomain(m) => write!(f, "parameter out of domain: {m}"),
            Error::Unsupported(m) => write!(f, "unsupported: {m}"),
            Error::Parse(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::Parse(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}
