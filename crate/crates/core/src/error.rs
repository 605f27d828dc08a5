use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is outside the supported range 1..={max}", max = crate::hilbert::MAX_DIM)]
    UnsupportedDimension(usize),

    #[error("state not normalized: squared norm is {0}")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not idempotent (max deviation {0:e})")]
    NotIdempotent(f64),

    #[error("projector is not rank one (trace {0})")]
    NotRankOne(f64),

    #[error("basis projectors {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),

    #[error("basis projectors do not sum to the identity (max deviation {0:e})")]
    Incomplete(f64),

    #[error("basis has {projectors} projectors but {labels} labels")]
    LabelCount { projectors: usize, labels: usize },

    #[error("impossible outcome: probability {0:e} is below the collapse threshold")]
    ImpossibleOutcome(f64),

    #[error("zero vector cannot span a ray")]
    ZeroVector,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("index {index} out of range for {len} outcomes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("probability {0} lies outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("events belong to different outcome spaces")]
    SpaceMismatch,

    #[error("unknown outcome label `{0}`")]
    UnknownLabel(String),

    #[error("unknown universe `{0}`")]
    UnknownUniverse(String),

    #[error("duplicate outcome label `{0}`")]
    DuplicateLabel(String),

    #[error("universe `{0}` has no outcomes")]
    EmptyUniverse(String),

    #[error("outcome `{label}` lies outside the complementation universe `{universe}`")]
    OutsideUniverse { label: String, universe: String },

    #[error("`{0}` and `{1}` belong to the same universe; the demonstration needs two contexts")]
    SameUniverse(String, String),

    #[error("weights must be nonnegative and sum to one (sum {0})")]
    NotConvex(f64),

    #[error("row {row} of the transition kernel is not stochastic")]
    NotStochastic { row: usize },

    #[error("tables were not generated from the same pair of bases in opposite orders")]
    BasisMismatch,

    #[error("unknown measurement context `{0}`")]
    UnknownContext(String),

    #[error("number of trials must be positive")]
    ZeroTrials,

    #[error("vector {0} is not unit norm")]
    NotUnit(usize),

    #[error("malformed ray family: {0}")]
    MalformedFamily(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
