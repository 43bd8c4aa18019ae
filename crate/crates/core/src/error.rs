use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid objectives: {0}")]
    InvalidObjectives(String),

    #[error("{0} objectives are not prefix-independent; reduce the game first")]
    ObjectiveNotPrefixIndependent(&'static str),

    #[error("objective kind {0} is already prefix-independent")]
    NotReachSafety(&'static str),

    #[error("vertex {0} is outside the allowed arena")]
    VertexNotAllowed(String),

    #[error("arena of {size} vertices exceeds the enumeration cap of {cap}")]
    ArenaTooLarge { size: usize, cap: usize },

    #[error("no play from {from} with payoff {payoff} inside the allowed arena")]
    NoSuchPlay { from: String, payoff: String },

    #[error("thresholds are not ordered: {min} is not below {max}")]
    InvalidThresholds { min: String, max: String },

    #[error("payoff {payoff} has length {got}, expected {expected}")]
    PayoffLength {
        payoff: String,
        got: usize,
        expected: usize,
    },

    #[error("invalid payoff bitstring {0:?}")]
    InvalidPayoff(String),

    #[error("payoff {0} is not achievable by a weak SPE from the initial vertex")]
    TargetNotAchievable(String),

    #[error("internal error: built witness is not good ({0})")]
    InternalWitnessNotGood(String),

    #[error("malformed witness: {0}")]
    MalformedWitness(String),

    #[error("witness is not good: {0}")]
    WitnessNotGood(String),

    #[error("witness has no lasso for index {0}")]
    WitnessIncomplete(String),

    #[error("malformed profile: {0}")]
    MalformedProfile(String),

    #[error("machine of player {player} is undefined on state {state} at vertex {vertex}")]
    MachinePartial {
        player: usize,
        state: String,
        vertex: String,
    },

    #[error("instance too large for brute-force oracle: {0}")]
    TooLarge(String),

    #[error("search budget of {0} candidates exhausted")]
    BudgetExceeded(u64),

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
