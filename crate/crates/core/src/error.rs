use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("polynomial {0:?} is reducible over the prime field")]
    ReduciblePolynomial(Vec<u32>),
    #[error("invalid defining polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("k = {k} exceeds q + 1 = {max}")]
    KTooLarge { k: usize, max: usize },
    #[error("points are linearly dependent")]
    DependentPoints,
    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("not an arc: points {0:?} lie in a common hyperplane")]
    NotAnArc(Vec<usize>),
    #[error("arc has t = 0; tangent constructions need t >= 1")]
    DegenerateT,
    #[error("subset {subset:?} has {found} tangent hyperplanes, expected {expected}")]
    TangentCountMismatch { subset: Vec<usize>, expected: usize, found: usize },
    #[error("exponent of total degree {total} exceeds t = {t}")]
    ExponentTooLarge { total: u32, t: u32 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("arc of size {n} is smaller than the interpolation set of size {needed}")]
    SizeTooSmall { n: usize, needed: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
