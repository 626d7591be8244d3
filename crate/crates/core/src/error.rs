use std::path::PathBuf;

use thiserror::Error;

use crate::game::ActionId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid-config: {0}")]
    InvalidConfig(String),
    #[error("illegal-action: {0:?} is not legal in this state")]
    IllegalAction(ActionId),
    #[error("terminal-state: no action can be chosen in a terminal state")]
    TerminalState,

    #[error("invalid-distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid-order: Renyi order must be positive and different from 1, got {0}")]
    InvalidOrder(f64),
    #[error("empty-counts: no observation recorded")]
    EmptyCounts,
    #[error("slot-out-of-range: slot {slot} with {n_actions} actions")]
    SlotOutOfRange { slot: usize, n_actions: usize },
    #[error("action-arity-mismatch: stored {stored} actions, got {given}")]
    ActionArityMismatch { stored: usize, given: usize },
    #[error("unknown-state: no observation for this state")]
    UnknownState,
    #[error("key-set-mismatch: entropy tables cover different states")]
    KeySetMismatch,

    #[error("missing-victim-table: the {0} reward needs a victim table")]
    MissingVictimTable(&'static str),
    #[error("nonfinite-input: {0}")]
    NonFiniteInput(String),
    #[error("invalid-parameter: {0}")]
    InvalidParameter(String),

    #[error("empty-dataset: planning needs at least one transition")]
    EmptyDataset,
    #[error("non-terminating-budget: entropy estimate did not settle within {0} episodes")]
    NonTerminatingBudget(u64),
    #[error("invalid-params: {0}")]
    InvalidParams(String),

    #[error("opening-too-long: every opening ended the game before the swap ({0} attempts)")]
    OpeningTooLong(u64),
    #[error("state-space-cap-exceeded: more than {0} reachable states")]
    StateSpaceCapExceeded(usize),
    #[error("empty-records: nothing to summarize")]
    EmptyRecords,

    #[error("format: {path}: line {line}: {msg}")]
    Format {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("digest-mismatch: {path}: expected {expected}, found {found}")]
    DigestMismatch {
        path: PathBuf,
        expected: String,
        found: String,
    },
    #[error("io: {path}: {msg}")]
    Io { path: PathBuf, msg: String },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            msg: err.to_string(),
        }
    }
}
