use thiserror::Error;

/// Failures while reading a polynomial from text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("not a polynomial with integer coefficients at position {pos}: {msg}")]
    NonPolynomial { pos: usize, msg: String },
}

/// Precondition failures of the polynomial, region and certificate operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("leading coefficient must be positive")]
    NonPositiveLeading,
    #[error("constant term must be nonzero")]
    ZeroConstantTerm,
    #[error("degree {found} is below the required minimum {required}")]
    DegreeTooLow { required: usize, found: usize },
    #[error("polynomial has a negative coefficient")]
    NegativeCoefficient,
    #[error("polynomial has no negative coefficient")]
    NoNegativeCoefficient,
    #[error("polynomial has no sign changes")]
    NoSignChanges,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("vertex of the reciprocal sector is zero; the lens degenerates")]
    DegenerateLens,
    #[error("lens vertex too large: {0}")]
    LensPrecondition(String),
    #[error("formula not applicable: {0}")]
    NotApplicable(String),
    #[error("value must be positive")]
    NonPositiveValue,
    #[error("value must be nonzero")]
    ZeroValue,
    #[error("search range is empty")]
    EmptyRange,
    #[error("factorization out of reach: {0}")]
    OutOfReach(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
