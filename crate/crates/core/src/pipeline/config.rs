use crate::agents::{TrainConfig, VictimBehavior};
use crate::entropy::EntropyKind;
use crate::error::{Error, Result};
use crate::game::Player;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub explore_episodes: u64,
    pub explore_lr: f64,
    pub explore_gamma: f64,
    pub explore_epsilon_start: f64,
    pub explore_epsilon_end: f64,
    /// Attacker transitions to store during rollout.
    pub rollout_transitions: u64,
    /// Victim actions to record during rollout.
    pub victim_action_target: u64,
    pub rollout_epsilon: f64,
    /// Independent rollout workers. Fixed by the config, not by the thread
    /// count, so output does not depend on `--jobs`.
    pub rollout_shards: usize,
    pub renyi_order: f64,
    pub unobserved_penalty: f64,
    pub plan_epochs: u64,
    pub plan_lr: f64,
    pub plan_gamma: f64,
    pub convergence_epsilon: f64,
    pub seed: u64,
    /// How the frozen victim picks moves while the attacker collects data.
    pub victim_behavior: VictimBehavior,
    pub victim_seat: Player,
    /// Uniformly random attacker moves at the start of every explore and
    /// rollout episode.
    pub opening_moves: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            explore_episodes: 5_000,
            explore_lr: 0.2,
            explore_gamma: 0.5,
            explore_epsilon_start: 1.0,
            explore_epsilon_end: 0.05,
            rollout_transitions: 100_000,
            victim_action_target: 1_000_000,
            rollout_epsilon: 0.05,
            rollout_shards: 8,
            renyi_order: 0.5,
            unobserved_penalty: -1.0,
            plan_epochs: 20,
            plan_lr: 0.2,
            plan_gamma: 0.5,
            convergence_epsilon: 0.01,
            seed: 0,
            victim_behavior: VictimBehavior::Softmax,
            victim_seat: Player::P1,
            opening_moves: 0,
        }
    }
}

impl PipelineConfig {
    pub fn attacker_seat(&self) -> Player {
        self.victim_seat.other()
    }

    pub fn entropy_kind(&self) -> Result<EntropyKind> {
        EntropyKind::from_order(self.renyi_order)
    }

    pub(crate) fn explore_train_config(&self) -> TrainConfig {
        let mut t = TrainConfig::new(self.explore_episodes, self.explore_gamma, self.seed);
        t.learning_rate = self.explore_lr;
        t.epsilon_start = self.explore_epsilon_start;
        t.epsilon_end = self.explore_epsilon_end;
        t.seat = self.attacker_seat();
        t.opening_moves = self.opening_moves;
        t
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("explore_episodes", self.explore_episodes),
            ("rollout_transitions", self.rollout_transitions),
            ("victim_action_target", self.victim_action_target),
            ("plan_epochs", self.plan_epochs),
            ("rollout_shards", self.rollout_shards as u64),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::InvalidConfig(format!("{name} must be positive")));
            }
        }
        if !(self.convergence_epsilon > 0.0) {
            return Err(Error::InvalidConfig("convergence_epsilon must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.rollout_epsilon) {
            return Err(Error::InvalidConfig(format!("rollout_epsilon {}", self.rollout_epsilon)));
        }
        if !self.unobserved_penalty.is_finite() {
            return Err(Error::InvalidConfig("unobserved_penalty must be finite".into()));
        }
        self.entropy_kind()?;
        self.explore_train_config().validate()?;
        crate::agents::train::check_rates(self.plan_lr, self.plan_gamma)
    }
}
