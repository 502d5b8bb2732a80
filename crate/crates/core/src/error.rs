use thiserror::Error;

/// Errors raised by the library.
///
/// Every variant maps to a stable kebab-case code (see [`Error::code`]) and to
/// one [`ErrorKind`], which the CLI turns into an exit status.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid ring parameters: {0}")]
    InvalidParams(String),
    #[error("modulus is not irreducible modulo {0}")]
    ReducibleModulus(u64),
    #[error("operands live in different rings")]
    IncompatibleRings,
    #[error("divided powers are not supported in characteristic {0}")]
    UnsupportedCharacteristic(u64),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("element is not a unit")]
    NotUnit,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("Frobenius matrix is singular over the fraction field")]
    SingularFrobenius,
    #[error("Verschiebung p^level * F^-1 is not integral (elementary divisor p^{valuation} exceeds level {level})")]
    NonIntegralVerschiebung { valuation: u32, level: u32 },
    #[error("insufficient precision: need n >= {required}, have n = {actual}")]
    InsufficientPrecision { required: u32, actual: u32 },
    #[error("invalid Galois action: {0}")]
    InvalidAction(String),
    #[error("trace {trace} violates the Weil bound for q = {q}")]
    InvalidTrace { trace: i64, q: u64 },
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),
    #[error("invalid block: {0}")]
    InvalidBlock(String),
    #[error("invalid extension data: {0}")]
    InvalidExtension(String),
    #[error("invalid simplicial structure: {0}")]
    InvalidSimplicial(String),
    #[error("malformed document: {0}")]
    Malformed(String),
}

/// Coarse classification of errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input is well formed but violates a mathematical invariant.
    Verification,
    /// The input cannot be parsed or does not describe a valid object.
    Malformed,
    /// The requested computation needs more p-adic digits.
    Precision,
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not-prime",
            Error::InvalidParams(_) => "invalid-params",
            Error::ReducibleModulus(_) => "reducible-modulus",
            Error::IncompatibleRings => "incompatible-rings",
            Error::UnsupportedCharacteristic(_) => "unsupported-characteristic",
            Error::Domain(_) => "domain",
            Error::NotUnit => "not-unit",
            Error::Shape(_) => "shape",
            Error::SingularFrobenius => "singular-frobenius",
            Error::NonIntegralVerschiebung { .. } => "non-integral-verschiebung",
            Error::InsufficientPrecision { .. } => "insufficient-precision",
            Error::InvalidAction(_) => "invalid-action",
            Error::InvalidTrace { .. } => "invalid-trace",
            Error::UnsupportedInput(_) => "unsupported-input",
            Error::InvalidBlock(_) => "invalid-block",
            Error::InvalidExtension(_) => "invalid-extension",
            Error::InvalidSimplicial(_) => "invalid-simplicial",
            Error::Malformed(_) => "malformed",
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InsufficientPrecision { .. } => ErrorKind::Precision,
            Error::SingularFrobenius
            | Error::NonIntegralVerschiebung { .. }
            | Error::InvalidBlock(_)
            | Error::InvalidExtension(_)
            | Error::InvalidSimplicial(_)
            | Error::InvalidTrace { .. }
            | Error::InvalidAction(_)
            | Error::NotUnit
            | Error::Domain(_) => ErrorKind::Verification,
            _ => ErrorKind::Malformed,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
