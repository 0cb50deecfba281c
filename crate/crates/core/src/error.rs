use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse `{0}` as a rational number")]
    ParseRational(String),

    #[error("resource {index}: {reason}")]
    InvalidResource { index: usize, reason: String },

    #[error("player {player}: {reason}")]
    InvalidStrategy { player: usize, reason: String },

    #[error("game must have at least one player")]
    NoPlayers,

    #[error("declared player count {declared} does not match {actual} strategy lists")]
    PlayerCountMismatch { declared: usize, actual: usize },

    #[error("profile has length {got}, expected {expected}")]
    ProfileLength { got: usize, expected: usize },

    #[error("player {player}: strategy index {index} out of range (has {count})")]
    StrategyOutOfRange {
        player: usize,
        index: usize,
        count: usize,
    },

    #[error("parameter {name} = {value} outside domain {domain}")]
    ParamDomain {
        name: &'static str,
        value: String,
        domain: &'static str,
    },

    #[error("profile space has {profiles} profiles, exceeding budget {budget}")]
    BudgetExceeded { profiles: String, budget: u64 },

    #[error("no pure equilibrium found")]
    NoEquilibrium,

    #[error("best-response dynamics did not converge within {0} steps")]
    MaxStepsExceeded(u64),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("path enumeration exceeded cap {0}")]
    PathCapExceeded(u64),

    #[error("network has no source-sink path")]
    NoPath,

    #[error("flow is not a feasible integral source-sink flow: {0}")]
    InfeasibleFlow(String),

    #[error("flow support contains a cycle")]
    CyclicFlow,

    #[error("unknown construction `{0}`")]
    UnknownConstruction(String),

    #[error("unknown inequality `{0}`")]
    UnknownInequality(String),

    #[error("json: {0}")]
    Json(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
