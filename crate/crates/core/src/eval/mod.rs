//! Swap-in evaluation, match summaries and an exact game solver.

mod matches;
mod oracle;

pub use matches::*;
pub use oracle::*;
