use rand::SeedableRng;

use super::policy::{epsilon_greedy_action, state_value, Policy, UniformRandom};
use super::qtable::{td_target, QTable};
use super::reward::{antagonist_reward, AttackerStep, RewardSpec};
use crate::error::{Error, Result};
use crate::game::{ActionId, Game, GameState, Player, StateKey, StepResult};
use crate::seed::{self, SimRng};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub gamma: f64,
    pub epsilon_start: f64,
    pub epsilon_end: f64,
    pub epsilon_decay_episodes: u64,
    pub episodes: u64,
    pub seed: u64,
    /// Seat the learner plays.
    pub seat: Player,
    /// The learner's first moves of each episode are uniformly random, to
    /// cover the states a swap-in evaluation starts from.
    pub opening_moves: u32,
}

impl TrainConfig {
    pub fn new(episodes: u64, gamma: f64, seed: u64) -> Self {
        TrainConfig {
            learning_rate: 0.2,
            gamma,
            epsilon_start: 1.0,
            epsilon_end: 0.05,
            epsilon_decay_episodes: (episodes / 2).max(1),
            episodes,
            seed,
            seat: Player::P1,
            opening_moves: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_rates(self.learning_rate, self.gamma)?;
        let unit = 0.0..=1.0;
        if !unit.contains(&self.epsilon_start)
            || !unit.contains(&self.epsilon_end)
            || self.epsilon_end > self.epsilon_start
        {
            return Err(Error::InvalidParameter(format!(
                "epsilon schedule {} -> {}",
                self.epsilon_start, self.epsilon_end
            )));
        }
        if self.episodes == 0 || self.epsilon_decay_episodes == 0 {
            return Err(Error::InvalidParameter("episode counts must be positive".into()));
        }
        Ok(())
    }

    /// Linear decay from `epsilon_start` to `epsilon_end`.
    pub fn epsilon(&self, episode: u64) -> f64 {
        let t = (episode as f64 / self.epsilon_decay_episodes as f64).min(1.0);
        self.epsilon_start + (self.epsilon_end - self.epsilon_start) * t
    }
}

pub(crate) fn check_rates(lr: f64, gamma: f64) -> Result<()> {
    if !(lr > 0.0 && lr <= 1.0) {
        return Err(Error::InvalidParameter(format!("learning rate {lr} outside (0, 1]")));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!("gamma {gamma} outside (0, 1)")));
    }
    Ok(())
}

/// Tabular Q-learning backup of one transition. Returns the new value.
#[allow(clippy::too_many_arguments)]
pub fn q_update(
    q: &mut QTable,
    game: &Game,
    s: StateKey,
    a: ActionId,
    reward: f64,
    s_next: &GameState,
    terminal: bool,
    lr: f64,
    gamma: f64,
) -> Result<f64> {
    check_rates(lr, gamma)?;
    if !reward.is_finite() {
        return Err(Error::NonFiniteInput(format!("reward {reward}")));
    }
    let next = if terminal { 0.0 } else { state_value(q, game, s_next) };
    Ok(q.step_towards(s, a, td_target(reward, next, terminal, gamma), lr))
}

pub(crate) fn behavior_action(
    q: &QTable,
    game: &Game,
    s: &GameState,
    opening: bool,
    epsilon: f64,
    rng: &mut SimRng,
) -> Result<ActionId> {
    if opening {
        UniformRandom.choose(game, s, rng)
    } else {
        epsilon_greedy_action(q, game, s, epsilon, rng)
    }
}

/// What happened after the attacker moved: the state the victim faced, the
/// victim's reply if the game went on, and the attacker's next state.
#[derive(Debug, Clone)]
pub(crate) struct Reply {
    pub faced: GameState,
    pub victim_action: Option<ActionId>,
    pub s_next: GameState,
    pub last: StepResult,
}

impl Reply {
    pub fn terminal(&self) -> bool {
        self.last.terminal
    }
}

/// Lets the opponent move while it is not `seat`'s turn. Returns the state
/// the opponent faced and its action, if it moved.
pub(crate) fn opponent_opening(
    game: &Game,
    seat: Player,
    opponent: &dyn Policy,
    rng: &mut SimRng,
) -> Result<(GameState, Option<(GameState, ActionId)>)> {
    let s = game.initial_state();
    if s.mover() == seat {
        return Ok((s, None));
    }
    let b = opponent.choose(game, &s, rng)?;
    let next = game.apply_action(&s, b)?.next;
    Ok((next, Some((s, b))))
}

pub(crate) fn attacker_move(
    game: &Game,
    s_t: &GameState,
    a: ActionId,
    opponent: &dyn Policy,
    rng: &mut SimRng,
) -> Result<Reply> {
    let first = game.apply_action(s_t, a)?;
    if first.terminal {
        return Ok(Reply {
            faced: first.next.clone(),
            victim_action: None,
            s_next: first.next.clone(),
            last: first,
        });
    }
    let faced = first.next;
    let b = opponent.choose(game, &faced, rng)?;
    let second = game.apply_action(&faced, b)?;
    Ok(Reply {
        s_next: second.next.clone(),
        faced,
        victim_action: Some(b),
        last: second,
    })
}

/// Trains a Q-table for `cfg.seat` against a fixed opponent.
pub fn train_q_agent(
    game: &Game,
    opponent: &dyn Policy,
    reward: &RewardSpec,
    cfg: &TrainConfig,
    rng: &mut SimRng,
) -> Result<QTable> {
    train_q_agent_with(game, opponent, reward, cfg, rng, 0, |_, _| Ok(()))
}

/// As [`train_q_agent`], calling `checkpoint(episodes_done, &table)` after
/// every `every` episodes (never when `every` is 0).
pub fn train_q_agent_with<F>(
    game: &Game,
    opponent: &dyn Policy,
    reward: &RewardSpec,
    cfg: &TrainConfig,
    rng: &mut SimRng,
    every: u64,
    mut checkpoint: F,
) -> Result<QTable>
where
    F: FnMut(u64, &QTable) -> Result<()>,
{
    cfg.validate()?;
    reward.validate()?;
    let mut reward_rng = match reward {
        RewardSpec::RandomReward { seed } => seed::stream(*seed, "random-reward", 0),
        _ => SimRng::seed_from_u64(0),
    };
    let mut q = QTable::new();
    for episode in 0..cfg.episodes {
        let eps = cfg.epsilon(episode);
        let (mut s, _) = opponent_opening(game, cfg.seat, opponent, rng)?;
        let mut moves = 0;
        while !s.is_terminal() {
            let a = behavior_action(&q, game, &s, moves < cfg.opening_moves, eps, rng)?;
            moves += 1;
            let reply = attacker_move(game, &s, a, opponent, rng)?;
            let terminal = reply.terminal();
            let game_reward = if reward.reads_game_reward() {
                reply.last.reward(cfg.seat)
            } else {
                0
            };
            let step = AttackerStep {
                s_t: &s,
                faced: &reply.faced,
                s_next: &reply.s_next,
                terminal,
                game_reward,
                move_count: s.move_count(),
            };
            let r = antagonist_reward(reward, game, &step, &mut reward_rng)?;
            let key = game.canonical_key(&s);
            q_update(&mut q, game, key, a, r, &reply.s_next, terminal, cfg.learning_rate, cfg.gamma)?;
            s = reply.s_next;
        }
        if every > 0 && (episode + 1) % every == 0 {
            checkpoint(episode + 1, &q)?;
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::game::GameConfig;

    #[test]
    fn q_update_examples() {
        let game = Game::new(GameConfig::connect_k(3, 3, 3)).unwrap();
        let s = game.initial_state();
        let k = game.canonical_key(&s);
        let next = game.apply_action(&s, ActionId(0)).unwrap().next;

        let mut q = QTable::new();
        let v = q_update(&mut q, &game, k, ActionId(0), 1.0, &next, true, 1.0, 0.9).unwrap();
        assert_eq!(v, 1.0);

        let mut q = QTable::new();
        q.set(game.canonical_key(&next), ActionId(1), 1.0).unwrap();
        let v = q_update(&mut q, &game, k, ActionId(0), 0.0, &next, false, 0.5, 0.9).unwrap();
        assert!((v - 0.45).abs() < 1e-15);

        assert!(q_update(&mut q, &game, k, ActionId(0), 0.0, &next, false, 0.0, 0.9).is_err());
        assert!(q_update(&mut q, &game, k, ActionId(0), 0.0, &next, false, 0.5, 1.0).is_err());
        assert!(matches!(
            q_update(&mut q, &game, k, ActionId(0), f64::INFINITY, &next, true, 0.5, 0.9),
            Err(Error::NonFiniteInput(_))
        ));
    }

    #[test]
    fn epsilon_schedule_is_linear() {
        let mut cfg = TrainConfig::new(100, 0.9, 0);
        cfg.epsilon_decay_episodes = 10;
        assert_eq!(cfg.epsilon(0), 1.0);
        assert!((cfg.epsilon(5) - 0.525).abs() < 1e-12);
        assert!((cfg.epsilon(10) - 0.05).abs() < 1e-12);
        assert!((cfg.epsilon(99) - 0.05).abs() < 1e-12);
    }

    #[test]
    fn no_signal_leaves_defaults() {
        let game = Game::new(GameConfig::connect_k(3, 3, 3)).unwrap();
        let cfg = TrainConfig::new(200, 0.9, 1);
        let mut rng = seed::stream(1, "train", 0);
        let q = train_q_agent(&game, &UniformRandom, &RewardSpec::Zero, &cfg, &mut rng).unwrap();
        assert!(q.entries() > 0);
        assert!(q.is_all_default());
    }

    #[test]
    fn training_is_reproducible() {
        let game = Game::new(GameConfig::connect_k(3, 3, 3)).unwrap();
        let cfg = TrainConfig::new(300, 0.9, 11);
        let run = || {
            let mut rng = seed::stream(cfg.seed, "train", 0);
            train_q_agent(&game, &UniformRandom, &RewardSpec::GameReward, &cfg, &mut rng).unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn checkpoints_fire_on_schedule() {
        let game = Game::new(GameConfig::connect_k(3, 3, 3)).unwrap();
        let cfg = TrainConfig::new(50, 0.9, 2);
        let mut seen = Vec::new();
        let mut rng = seed::stream(2, "train", 0);
        train_q_agent_with(&game, &UniformRandom, &RewardSpec::MoveMaximizer, &cfg, &mut rng, 20, |ep, _| {
            seen.push(ep);
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, vec![20, 40]);
    }

    #[test]
    fn second_seat_learns_after_opening() {
        let game = Game::new(GameConfig::connect_k(3, 3, 3)).unwrap();
        let mut cfg = TrainConfig::new(50, 0.9, 2);
        cfg.seat = Player::P2;
        let mut rng = seed::stream(2, "train", 0);
        let q = train_q_agent(&game, &UniformRandom, &RewardSpec::GameReward, &cfg, &mut rng).unwrap();
        let start = game.canonical_key(&game.initial_state());
        assert!(q.row(start).is_none());
        assert!(q.states() > 0);
    }

    proptest! {
        #[test]
        fn update_contracts_towards_target(old in -5.0f64..5.0, reward in -2.0f64..2.0, lr in 0.01f64..1.0) {
            let game = Game::new(GameConfig::connect_k(3, 3, 3)).unwrap();
            let s = game.initial_state();
            let next = game.apply_action(&s, ActionId(1)).unwrap().next;
            let k = game.canonical_key(&s);
            let mut q = QTable::new();
            q.set(k, ActionId(1), old).unwrap();
            let new = q_update(&mut q, &game, k, ActionId(1), reward, &next, true, lr, 0.9).unwrap();
            prop_assert!(((new - reward).abs() - (1.0 - lr) * (old - reward).abs()).abs() < 1e-12);
        }
    }
}
