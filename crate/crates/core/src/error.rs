use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("modulus {0} exceeds the supported bound 2^31")]
    ModulusTooLarge(u64),

    #[error("no inverse of zero")]
    ZeroInverse,

    #[error("-1 is a non-residue mod {0} (p = 3 mod 4)")]
    MinusOneNonResidue(u64),

    #[error("Cayley transform undefined: g - I is singular")]
    CayleyUndefined,

    #[error("dense-only operation: p = {p} exceeds the dense cap {cap}")]
    DenseCapExceeded { p: u64, cap: u64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coefficient labels do not match the basis labels")]
    LabelMismatch,

    #[error("numeric consistency check failed for {what}: residual {residual:e}")]
    NumericInconsistency { what: String, residual: f64 },

    #[error("no auxiliary element g0 with g0 - I and g*g0 - I invertible")]
    NoAuxiliaryElement,

    #[error("not an element of SL2: determinant is {0}")]
    NotUnimodular(u64),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
