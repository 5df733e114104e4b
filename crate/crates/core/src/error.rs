use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    ContextMismatch,
    #[error("gcd of two zero polynomials is undefined")]
    UndefinedGcd,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("inseparable input: {0}")]
    InseparableInput(String),
    #[error("denominator is not invertible modulo the modulus")]
    NonInvertibleDenominator,
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("not an isogeny: {0}")]
    NotAnIsogeny(String),
    #[error("solving denominator vanishes at coefficient index {index}")]
    DegenerateDenominator { index: usize },
    #[error("J denominator shares the factor {witness} with g")]
    DegenerateJDenominator { witness: String },
    #[error("integrality violation: {0}")]
    IntegralityViolation(String),
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),
    #[error("not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("not prime: {0}")]
    NotPrime(String),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Variant name, used by the CLI on stderr.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::ContextMismatch => "ContextMismatch",
            Error::UndefinedGcd => "UndefinedGcd",
            Error::InvalidInput(_) => "InvalidInput",
            Error::InseparableInput(_) => "InseparableInput",
            Error::NonInvertibleDenominator => "NonInvertibleDenominator",
            Error::NotDivisible(_) => "NotDivisible",
            Error::NotAnIsogeny(_) => "NotAnIsogeny",
            Error::DegenerateDenominator { .. } => "DegenerateDenominator",
            Error::DegenerateJDenominator { .. } => "DegenerateJDenominator",
            Error::IntegralityViolation(_) => "IntegralityViolation",
            Error::HypothesisViolation(_) => "HypothesisViolation",
            Error::NotAnIdeal(_) => "NotAnIdeal",
            Error::NotPrime(_) => "NotPrime",
            Error::TooLarge(_) => "TooLarge",
            Error::Parse(_) => "Parse",
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
