use thiserror::Error;

use crate::exponents::ExponentKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{c} is not a member of the {kind} sequence")]
    NotAMember { kind: ExponentKind, c: u64 },
    #[error("{z} is outside the codomain of the {kind} sigma map")]
    NotInCodomain { kind: ExponentKind, z: u64 },
    #[error("operation not supported for the {0} sequence")]
    UnsupportedKind(ExponentKind),
    #[error("{c} has no double, sum or double-sum decomposition")]
    NoDecomposition { c: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("leading coefficient must be positive")]
    LeadingCoefficientNonpositive,
    #[error("precision {0} is below the minimum of 8 bits")]
    PrecisionUnderflow(u32),
    #[error("imaginary part of tau must be positive")]
    NotUpperHalfPlane,
    #[error("|q| is too close to 1 for a certified truncation at {0} bits")]
    QTooLarge(u32),
    #[error("minima table is empty")]
    EmptyTable,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotAMember { .. } => "not-a-member",
            Error::NotInCodomain { .. } => "not-in-codomain",
            Error::UnsupportedKind(_) => "unsupported-kind",
            Error::NoDecomposition { .. } => "no-decomposition",
            Error::NotPrime(_) => "not-prime",
            Error::LeadingCoefficientNonpositive => "leading-coefficient-nonpositive",
            Error::PrecisionUnderflow(_) => "precision-underflow",
            Error::NotUpperHalfPlane => "not-upper-half-plane",
            Error::QTooLarge(_) => "q-too-large",
            Error::EmptyTable => "empty-table",
            Error::Invalid(_) => "invalid",
            Error::Parse { .. } => "parse",
        }
    }
}
