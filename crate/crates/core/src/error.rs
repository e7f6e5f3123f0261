use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator `{name}`: {reason}")]
    InvalidGenerator { name: String, reason: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("relation for `{lead}` is not homogeneous: {reason}")]
    NonHomogeneousRelation { lead: String, reason: String },
    #[error("relation for `{lead}` is not triangular: {reason}")]
    NotTriangular { lead: String, reason: String },
    #[error("element is not homogeneous in codimension")]
    NotHomogeneous,
    #[error("elements belong to different presentations")]
    MixedPresentations,
    #[error("codimension {codim} is outside 0..={max}")]
    CodimOutOfRange { codim: i64, max: u32 },
    #[error("parse error in `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("operation requires a {expected} model, got `{got}`")]
    WrongModel { expected: &'static str, got: String },
    #[error("model `{0}` has no cycle class map")]
    NoCycleClass(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("{0}")]
    OutsideCaseSplit(String),
    #[error("no Lefschetz exponent: n - 2p = {0} < 0")]
    NoLefschetzExponent(i64),
    #[error("malformed blow-up data: {0}")]
    MalformedBlowup(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
