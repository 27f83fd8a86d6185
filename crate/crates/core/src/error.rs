use thiserror::Error;

use crate::polys::Exponent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse field value {0:?}")]
    Parse(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("{0} is not an admissible prime modulus (prime below 2^32 required)")]
    InvalidModulus(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("moments outside the known support: {}", fmt_exps(.0))]
    Support(Vec<Exponent>),
    #[error("empty support")]
    EmptySupport,
    #[error("support is not connected to 0: {0} has no predecessor in the support")]
    NotConnected(Exponent),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("border basis is not certified (insufficient data); border monomials without relation: {}", fmt_exps(.0))]
    NotCertified(Vec<Exponent>),
    #[error("characteristic polynomial has roots outside the coefficient field")]
    IrrationalSpectrum,
    #[error("eigenvalue {0} is not simple")]
    DefectiveEigenvalue(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("no separating combination found after {0} attempts")]
    RetriesExhausted(usize),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("singular system")]
    SingularSystem,
    #[error("inconsistent system")]
    InconsistentSystem,
    #[error("coordinate {value} is not a power of {base}")]
    NotAPower { value: String, base: String },
    #[error("decoding failure: {0}")]
    DecodingFailure(String),
    #[error("benchmark failure: {0}")]
    BenchFailure(String),
}

impl Error {
    /// Stable identifier used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Field(FieldError::DivisionByZero) => "DivisionByZero",
            Error::Field(FieldError::Parse(_)) => "ParseError",
            Error::Field(FieldError::FieldMismatch(_)) => "FieldMismatch",
            Error::Field(FieldError::InvalidModulus(_)) => "InvalidModulus",
            Error::Support(_) => "SupportError",
            Error::EmptySupport => "EmptySupport",
            Error::NotConnected(_) => "NotConnected",
            Error::InvalidInput(_) => "InvalidInput",
            Error::NotCertified(_) => "NotCertified",
            Error::IrrationalSpectrum => "IrrationalSpectrum",
            Error::DefectiveEigenvalue(_) => "DefectiveEigenvalue",
            Error::UnsupportedField(_) => "UnsupportedField",
            Error::RetriesExhausted(_) => "RetriesExhausted",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::SingularSystem => "SingularSystem",
            Error::InconsistentSystem => "InconsistentSystem",
            Error::NotAPower { .. } => "NotAPower",
            Error::DecodingFailure(_) => "DecodingFailure",
            Error::BenchFailure(_) => "BenchFailure",
        }
    }
}

fn fmt_exps(v: &[Exponent]) -> String {
    let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
