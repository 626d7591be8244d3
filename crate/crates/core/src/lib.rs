//! Two-player board games, entropy estimators, tabular agents and the
//! reward-free attacker pipeline.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod agents;
pub mod entropy;
pub mod error;
pub mod eval;
pub mod exec;
pub mod game;
pub mod io;
pub mod pipeline;
pub mod seed;

pub use error::{Error, Result};
