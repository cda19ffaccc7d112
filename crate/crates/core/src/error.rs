use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible rings: operands must share bound and variables")]
    IncompatibleRing,
    #[error("degree {degree} exceeds the truncation bound {bound}")]
    OutOfRange { degree: u32, bound: u32 },
    #[error("no substitution factor for variable `{0}`")]
    IncompleteSubstitution(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),
    #[error("degenerate lattice: the weight vector needs at least two entries")]
    DegenerateLattice,
    #[error("singular input: {0}")]
    SingularInput(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("invalid cell: {0}")]
    InvalidCell(String),
    #[error("empty bundle: at least one summand is required")]
    EmptyBundle,
    #[error("unknown bundle label `{0}`")]
    UnknownLabel(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("depth violation: {0}")]
    DepthViolation(String),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("marking must be strictly positive, got {0}")]
    NonPositiveMarking(String),
    #[error("empty label set")]
    EmptyLabelSet,
    #[error("no auxiliary twist configured")]
    AuxMissing,
    #[error("edge form changes sign on the simplex (edge {edge}); exact integration unavailable")]
    NotSignConstant { edge: usize },
    #[error("sample count must be positive")]
    ZeroSamples,
    #[error("invalid trivialization: {0}")]
    InvalidTrivialization(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error in `{field}`: {message}")]
    Parse { field: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
