use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {family} parameter: {message}")]
    InvalidParameter { family: &'static str, message: String },

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("not an abelian subgroup: {0}")]
    NotAbelianSubgroup(String),

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("operands belong to different groups")]
    GroupMismatch,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("span is not a unital *-subalgebra: {0}")]
    NotSubalgebra(String),

    #[error("cocycle table does not match the dual group: {0}")]
    IndexMismatch(String),

    #[error("twist refused: {0}")]
    TwistRefused(String),

    #[error("expectation refused: {0}")]
    ExpectationRefused(String),

    #[error("hypotheses of the induced coproduct failed: {0}")]
    HypothesisFailed(String),

    #[error("basis does not span the subalgebra: {0}")]
    NotSpanning(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
