use thiserror::Error;

/// Errors raised by the toric pipeline. Every variant is a domain error: the
/// input was well formed but the requested computation does not apply to it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not independent: the vectors are linearly dependent over the rationals")]
    NotIndependent,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("cone is not strongly convex (contains a line)")]
    NotStronglyConvex,
    #[error("cone is not pointed; a Hilbert basis needs a pointed cone")]
    NotPointed,
    #[error("limit does not exist: the vector lies outside the cone")]
    LimitDoesNotExist,
    #[error("the zero vector has no limit face")]
    ZeroVector,
    #[error("cone is not full-dimensional")]
    NotFullDimensional,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("exponent {0} is not in the semigroup")]
    NotInSemigroup(String),
    #[error("invalid monomial order: {0}")]
    InvalidOrder(String),
    #[error("weight is not in the cone")]
    WeightOutsideCone,
    #[error("degenerate weight cone: the weight lies on a wall of the Groebner fan")]
    DegenerateWeightCone,
    #[error("fan enumeration unsupported in dimension {0} (only dimension 2)")]
    FanEnumerationUnsupported(usize),
    #[error("iteration cap of {0} steps exceeded")]
    IterationCap(usize),
    #[error("the Nash order n must be a positive integer")]
    InvalidNashOrder,
    #[error("power rule calibration inconclusive: {0}")]
    CalibrationInconclusive(String),
    #[error("blowup oracle needs two independent Hilbert basis elements")]
    OracleDegenerate,
    #[error("not a branch semigroup: the generators must be positive with gcd 1")]
    NotBranchSemigroup,
    #[error("the curve criterion only holds in characteristic zero (got characteristic {0})")]
    PositiveCharacteristic(u64),
    #[error("{0} is not a prime below 2^61")]
    NotPrime(u64),
    #[error("integer too large for exponent arithmetic")]
    Overflow,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
