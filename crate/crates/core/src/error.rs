use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("degree {0} is out of range")]
    DegreeOutOfRange(usize),
    #[error("GF({p}^{e}) exceeds the supported field size")]
    FieldTooLarge { p: u32, e: u32 },
    #[error("no element of order {m} in a field of order {q}")]
    OrderUnavailable { m: u32, q: u32 },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("operands have {0} and {1} generators")]
    GeneratorCountMismatch(usize, usize),
    #[error("expected degree {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("degree caps differ: {0} vs {1}")]
    CapMismatch(usize, usize),
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeOutOfCap { degree: usize, cap: usize },
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("symmetric group indices differ: {0} vs {1}")]
    IndexMismatch(usize, usize),
    #[error("subspace is not mapped into the target by d_{0}")]
    NotStable(usize),
    #[error("module has no ambient embedding")]
    NoAmbient,
    #[error("module of dimension {dim} over S_{n} is too large for this operation")]
    DimensionTooLarge { dim: usize, n: usize },
    #[error("endomorphism does not commute with the action")]
    NotEquivariant,
    #[error("random endomorphism budget exhausted after {0} trials")]
    TrialBudgetExhausted(usize),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("transformation is not a coalgebra map in degree {0}")]
    NotCoalgebraMap(usize),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("negative generator dimension {value} in degree {degree}")]
    NegativeGeneratorDim { degree: usize, value: i64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("side mismatch: {0}")]
    SideMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
