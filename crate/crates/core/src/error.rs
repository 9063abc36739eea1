use thiserror::Error;

/// Errors surfaced by the library. Variants map one-to-one onto the failure
/// modes of the individual operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("field of size {size} exceeds the cap {cap}")]
    FieldTooLarge { size: u128, cap: u128 },
    #[error("q = {q} is not congruent to 1 mod {modulus}")]
    BadCongruence { q: u64, modulus: u64 },
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("degree {degree} exceeds the limit {limit}")]
    DegreeTooLarge { degree: usize, limit: usize },
    #[error("{what}: {count} exceeds the limit {limit}")]
    TooMany { what: &'static str, count: u128, limit: u128 },
    #[error("genus formula has no integral solution: 2g = {twice_genus}")]
    NonIntegralGenus { twice_genus: i64 },
    #[error("family size {size} exceeds the enumeration cap {cap}")]
    FamilyTooLarge { size: u128, cap: u128 },
    #[error("empty family: {0}")]
    EmptyFamily(String),
    #[error("expected a rational integer, got {0}")]
    NonIntegerResult(String),
    #[error("extension F_(q^{degree}) with q = {q} exceeds the table cap")]
    ExtensionTooLarge { q: u64, degree: u32 },
    #[error("root of the L-polynomial off the circle |u| = q^(-1/2) by {deviation:e}")]
    RhViolation { deviation: f64 },
    #[error("direct eigenangle evaluation needs a closed-form test function")]
    UnsupportedDirectEval,
    #[error("fourier transform is nonzero at {point}, outside the allowed support {bound}")]
    SupportViolation { point: f64, bound: f64 },
    #[error("moment index {n} outside the declared range 1..={max}")]
    OutOfRange { n: i64, max: i64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
