//! Reward-free attacker pipeline: explore with a self-entropy reward, roll
//! out against the victim while counting its actions, then plan offline on
//! the empirical victim entropy.

mod bound;
mod config;
mod dataset;
mod phases;
mod victim_entropy;

pub use bound::{sample_bound, SampleBoundParams};
pub use config::PipelineConfig;
pub use dataset::{Transition, TrajectoryDataset};
pub use phases::{
    explore_phase, explore_phase_with, plan_phase, planning_reward, rollout_phase, Rollout,
};
pub use victim_entropy::{learn_victim_entropy, VictimEntropyConfig, VictimEntropyEstimate};
