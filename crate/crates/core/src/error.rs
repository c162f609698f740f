use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("evaluation point has a zero coordinate")]
    ZeroCoordinate,

    #[error("value is not invertible modulo {modulus}")]
    NotInvertibleMod { modulus: u64 },

    #[error("{0} is not a unit of the Laurent ring")]
    NotAUnit(String),

    #[error("modulus {0} is not an odd prime below 2^63")]
    BadModulus(u64),

    #[error("modulus {0} must exceed 2^60")]
    ModulusTooSmall(u64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid index: {0}")]
    Index(String),

    #[error("leg positions must be distinct, got {0:?}")]
    RepeatedLegs((usize, usize)),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degree {degree} exceeds the configured bound {bound}")]
    DegreeBound { degree: usize, bound: usize },

    #[error("element is not homogeneous")]
    Inhomogeneous,

    #[error("alphabet mismatch: {0}")]
    Alphabet(String),

    #[error("invalid admissible data: {0}")]
    Admissible(String),

    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Labels an error with the pipeline stage that raised it.
    pub fn at_stage(self, stage: &str) -> Self {
        Error::Stage {
            stage: stage.to_string(),
            source: Box::new(self),
        }
    }
}
