use thiserror::Error;

use crate::coalition::Coalition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("universe of {agents} agents exceeds the limit of {limit}")]
    UniverseTooLarge { agents: usize, limit: usize },
    #[error("duplicate agent name `{0}`")]
    DuplicateAgent(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("coalition {bits:#b} is not contained in a universe of {agents} agents")]
    InvalidCoalition { bits: u64, agents: usize },
    #[error("{operation} needs at most {cap} agents, got {agents}")]
    CapExceeded { operation: &'static str, agents: usize, cap: usize },
    #[error("universe mismatch: {0}")]
    UniverseMismatch(String),
    #[error("allocation has {got} entries, universe has {expected} agents")]
    LengthMismatch { expected: usize, got: usize },
    #[error("missing value for coalition {0:?}")]
    MissingEntry(Coalition),
    #[error("duplicate entry for coalition {0:?}")]
    DuplicateEntry(Coalition),
    #[error("the empty coalition must have value 0")]
    NonZeroEmpty,
    #[error("negative cost for coalition {0:?}")]
    NegativeCost(Coalition),
    #[error("game is not superadditive: v({first:?} ∪ {second:?}) < v({first:?}) + v({second:?})")]
    NotSuperadditive { first: Coalition, second: Coalition },
    #[error("an ISN needs at least two agents, got {0}")]
    TooFewAgents(usize),
    #[error("malformed MC-Net: {0}")]
    MalformedNet(String),
    #[error("operation needs an explicit table-backed game")]
    NotExplicit,
    #[error("promoted and prohibited lists share coalition {0:?}")]
    ConflictingLabels(Coalition),
    #[error("promoted coalitions {first:?} and {second:?} overlap")]
    NotExclusive { first: Coalition, second: Coalition },
    #[error("malformed evidence: {0}")]
    MalformedEvidence(String),
    #[error("tax value must be non-negative")]
    NegativeTax,
    #[error("linear system dimensions disagree: {0}")]
    DimensionMismatch(String),
    #[error("internal cross-check failed: {0}")]
    Inconsistent(String),
}
