use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("field order {p}^{k} exceeds the enumeration ceiling of {ceiling} elements")]
    FieldTooLarge { p: u64, k: u32, ceiling: u64 },
    #[error(
        "no monic irreducible polynomial of degree {k} over F_{p} (ceiling or configuration bug)"
    )]
    NoIrreducibleFound { p: u32, k: u32 },
    #[error("no normal element of F_{order} over F_{base} (rank test bug)")]
    NormalElementNotFound { order: u32, base: u32 },
    #[error("F_{ext} is not an extension of F_{base}")]
    NotAnExtension { base: u32, ext: u32 },
    #[error("operation requires a prime base field, got F_{0}")]
    UnsupportedBase(u32),
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("work estimate {needed} exceeds the ceiling {ceiling}")]
    WorkCeilingExceeded { needed: u128, ceiling: u64 },
    #[error("interpolation needs {needed} distinct scalars but the field has only {available}")]
    InsufficientScalars { needed: usize, available: usize },
    #[error("highest-weight component is not weighted homogeneous")]
    NonHomogeneousLeadingPart,
    #[error(
        "system violates the standing assumption m <= s <= r - m - 2 (m = {m}, s = {s}, r = {r})"
    )]
    StandingAssumption { m: usize, s: usize, r: usize },
    #[error("invalid factorization pattern: {0}")]
    InvalidPattern(String),
    #[error("linear constraints are inconsistent: alpha lies outside the column space")]
    InconsistentSystem,
    #[error("linear constraints are not linearly independent")]
    DependentConstraints,
    #[error("coefficient of G(x, T) does not lie in the base field")]
    CoefficientNotRational,
    #[error("parameter out of range: {0}")]
    HypothesisRangeViolation(String),
    #[error("point count {count} is not divisible by {divisor}")]
    NonDivisibleCount { count: u64, divisor: u64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("count report was produced from a different system")]
    MismatchedReport,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
