use thiserror::Error;

/// Errors raised by the library. Variant names follow the operation
/// contracts; `message`-carrying variants name the violated hypothesis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("operands belong to different fields")]
    DescriptorMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not irreducible over F_{p}")]
    NotIrreducible { p: u64 },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("zero form")]
    ZeroForm,
    #[error("duplicate roots in reconstruction input")]
    DuplicateRoots,
    #[error("multiplicities sum to {got}, expected degree {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("point does not lie on the curve")]
    PointNotOnCurve,
    #[error("curve is singular at the given point")]
    SingularPoint,
    #[error("the ambient curve is singular")]
    SingularCurve,
    #[error("the two curves share a component")]
    SharedComponent,
    #[error("coincident lines")]
    CoincidentLines,
    #[error("Carnot hypothesis violated: {0}")]
    InvariantViolation(String),
    #[error("no admissible solution: {0}")]
    NoAdmissibleSolution(String),
    #[error("Carnot condition does not hold for this instance")]
    CarnotViolated,
    #[error("linear system inconsistent (internal invariant failure)")]
    InconsistentSystem,
    #[error("attempts exhausted after {0} trials")]
    AttemptsExhausted(usize),
    #[error("field too small: {0}")]
    FieldTooSmall(String),
    #[error("r must be >= 2, got {0}")]
    ROutOfRange(i64),
    #[error("degree deficit: m'*d = {md} < n = {n}")]
    DegreeDeficit { md: i64, n: i64 },
    #[error("empty linear system")]
    EmptySystem,
    #[error("system has dimension zero, base locus is the single member")]
    DimensionZero,
    #[error("certification failed at step {step}: {detail}")]
    CertificationFailed { step: String, detail: String },
    #[error("not enough rational points: {0}")]
    InsufficientRationalPoints(String),
    #[error("unsupported over this field: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
