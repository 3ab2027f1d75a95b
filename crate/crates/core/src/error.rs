use thiserror::Error;

use crate::budget::BudgetExceeded;
use crate::logic::{ParseError, PlayerId};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("goal of player {player}: {source}")]
    Goal {
        player: PlayerId,
        #[source]
        source: ParseError,
    },
    #[error("invalid signature: {0}")]
    Signature(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("unknown player {0}")]
    UnknownPlayer(u64),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("expected outcomes are indexed by different information sets")]
    IndexMismatch,
    #[error("precondition violated for player {player}: {reason}")]
    Precondition { player: PlayerId, reason: String },
    #[error("precondition violated: {0}")]
    Unsupported(String),
    #[error("goal of player {0} is not a knowing-whether formula")]
    NotKw(PlayerId),
    #[error("goal of player {0} contains a trivial constituent Kw_i p_i")]
    TrivialConstituent(PlayerId),
    #[error("profile is not globally uniform")]
    NotGloballyUniform,
    #[error("invalid strategy or profile: {0}")]
    InvalidProfile(String),
    #[error("world {0} is not in the model")]
    WorldAbsent(usize),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
