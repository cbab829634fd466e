use thiserror::Error;

use crate::group::Letter;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("letter index {0} is not in the generating set")]
    UnknownLetter(Letter),
    #[error("ball exceeds the element limit of {limit}")]
    BallTooLarge { limit: usize },
    #[error("alphabets differ: {0}")]
    AlphabetMismatch(String),
    #[error("homomorphism mode violated: {0}")]
    ModeViolation(String),
    #[error("target difference is outside the ball of radius {0}")]
    TargetOutsideBall(usize),
    #[error("a pointwise distance exceeds the cutoff {0}")]
    DistanceCutoffExceeded(usize),
    #[error("language has no regular carrier")]
    NotRegular,
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("transversal does not cover the audited ball: {0}")]
    IndexNotFinite(String),
    #[error("image of `{0}` is longer than the requested length {1}")]
    LengthNotEqualizable(String, usize),
    #[error("synchronous free products require bijective factors")]
    SynchronousRequiresBijective,
    #[error("cocycle witnesses do not partition the language: {0}")]
    WitnessPartitionViolation(String),
    #[error("normal-factor language has no representative lookup")]
    MissingLookup,
    #[error("no multiplier word found within length {0}")]
    NotFoundWithinBound(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
}
