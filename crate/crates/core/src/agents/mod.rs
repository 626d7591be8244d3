//! Tabular Q-learning agents, policies over Q-tables and attacker rewards.

pub mod policy;
pub mod qtable;
pub mod reward;
pub mod train;

pub use policy::{
    epsilon_greedy_action, greedy_action, softmax, softmax_policy, state_value, EpsilonGreedy,
    FirstLegal, Greedy, Policy, Softmax, UniformRandom, VictimBehavior,
};
pub use qtable::QTable;
pub use reward::{antagonist_reward, AttackerStep, EntropySite, RewardSpec};
pub use train::{q_update, train_q_agent, train_q_agent_with, TrainConfig};
