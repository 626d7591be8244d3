use rand::seq::SliceRandom;
use rand::Rng;

use super::config::PipelineConfig;
use super::dataset::{Transition, TrajectoryDataset};
use crate::agents::policy::softmax_policy;
use crate::agents::qtable::{td_target, QTable};
use crate::agents::train::{attacker_move, behavior_action, check_rates, opponent_opening, q_update};
use crate::entropy::{table_entropy, ActionCountTable};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::game::{ActionId, Game, GameState, StateKey};
use crate::seed::{self, SimRng};

/// Trains the explorer. Each step is rewarded with the entropy of the
/// softmax of the explorer's own current values at the decision state.
pub fn explore_phase(game: &Game, victim: &QTable, cfg: &PipelineConfig, rng: &mut SimRng) -> Result<QTable> {
    explore_phase_with(game, victim, cfg, rng, |_, _, _| Ok(()))
}

/// As [`explore_phase`], calling `on_episode(episodes_done, moves, &table)`
/// after every episode.
pub fn explore_phase_with<F>(
    game: &Game,
    victim: &QTable,
    cfg: &PipelineConfig,
    rng: &mut SimRng,
    mut on_episode: F,
) -> Result<QTable>
where
    F: FnMut(u64, u32, &QTable) -> Result<()>,
{
    cfg.validate()?;
    let tc = cfg.explore_train_config();
    let kind = cfg.entropy_kind()?;
    let victim = cfg.victim_behavior.policy(victim);
    let mut q = QTable::new();
    for episode in 0..tc.episodes {
        let eps = tc.epsilon(episode);
        let (mut s, _) = opponent_opening(game, tc.seat, &*victim, rng)?;
        let mut moves = 0;
        while !s.is_terminal() {
            let r = kind.of(&softmax_policy(&q, game, &s)?)?;
            let a = behavior_action(&q, game, &s, moves < tc.opening_moves, eps, rng)?;
            moves += 1;
            let reply = attacker_move(game, &s, a, &*victim, rng)?;
            let key = game.canonical_key(&s);
            q_update(&mut q, game, key, a, r, &reply.s_next, reply.terminal(), tc.learning_rate, tc.gamma)?;
            s = reply.s_next;
        }
        on_episode(episode + 1, s.move_count(), &q)?;
    }
    Ok(q)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Rollout {
    pub dataset: TrajectoryDataset,
    pub counts: ActionCountTable,
}

/// Plays the explorer (epsilon-greedy after the opening) against the frozen victim, storing
/// whole trajectories until `rollout_transitions` are kept and counting
/// victim actions, keyed by the state the victim faced, until
/// `victim_action_target` are recorded. Work is split into
/// `rollout_shards` seeded shards merged in shard order.
pub fn rollout_phase(
    game: &Game,
    explorer: &QTable,
    victim: &QTable,
    cfg: &PipelineConfig,
    rng: &mut SimRng,
    exec: Exec,
) -> Result<Rollout> {
    cfg.validate()?;
    let master: u64 = rng.gen();
    let shards = cfg.rollout_shards as u64;
    let per_m = cfg.rollout_transitions.div_ceil(shards) as usize;
    let per_k = cfg.victim_action_target.div_ceil(shards);
    let parts = exec.try_map(cfg.rollout_shards, |i| {
        let mut rng = seed::stream(master, "rollout", i as u64);
        rollout_shard(game, explorer, victim, cfg, per_m, per_k, &mut rng)
    })?;
    let mut out = Rollout::default();
    for part in parts {
        out.dataset.append(&part.dataset);
        out.counts.merge(&part.counts)?;
    }
    Ok(out)
}

fn rollout_shard(
    game: &Game,
    explorer: &QTable,
    victim: &QTable,
    cfg: &PipelineConfig,
    per_m: usize,
    per_k: u64,
    rng: &mut SimRng,
) -> Result<Rollout> {
    let victim = cfg.victim_behavior.policy(victim);
    let mut out = Rollout::default();
    let mut trajectory = Vec::new();
    while out.dataset.len() < per_m || out.counts.total_observations() < per_k {
        let keep = out.dataset.len() < per_m;
        trajectory.clear();
        let (mut s, opening) = opponent_opening(game, cfg.attacker_seat(), &*victim, rng)?;
        if let Some((s0, b)) = opening {
            record(&mut out.counts, game, &s0, b)?;
        }
        let mut moves = 0;
        while !s.is_terminal() {
            let opening = moves < cfg.opening_moves;
            let a = behavior_action(explorer, game, &s, opening, cfg.rollout_epsilon, rng)?;
            moves += 1;
            let reply = attacker_move(game, &s, a, &*victim, rng)?;
            let faced = reply.victim_action.map(|_| game.canonical_key(&reply.faced));
            if let Some(b) = reply.victim_action {
                record(&mut out.counts, game, &reply.faced, b)?;
            }
            if keep {
                trajectory.push(Transition {
                    s: game.canonical_key(&s),
                    a,
                    s_next: game.canonical_key(&reply.s_next),
                    terminal: reply.terminal(),
                    faced,
                });
            }
            s = reply.s_next;
        }
        out.dataset.push_trajectory(&trajectory);
    }
    Ok(out)
}

fn record(counts: &mut ActionCountTable, game: &Game, faced: &GameState, action: ActionId) -> Result<()> {
    let legal = game.legal_actions(faced);
    let slot = legal
        .iter()
        .position(|&b| b == action)
        .ok_or(Error::IllegalAction(action))?;
    counts.record(game.canonical_key(faced), slot, legal.len())
}

/// Entropy of the observed victim actions at `key`, or the unobserved
/// penalty when the victim was never seen there.
pub fn planning_reward(counts: &ActionCountTable, key: StateKey, cfg: &PipelineConfig) -> Result<f64> {
    match table_entropy(counts, key, cfg.entropy_kind()?) {
        Ok(h) => Ok(h),
        Err(Error::UnknownState) => Ok(cfg.unobserved_penalty),
        Err(e) => Err(e),
    }
}

fn transition_reward(counts: &ActionCountTable, t: &Transition, cfg: &PipelineConfig) -> Result<f64> {
    match t.faced {
        Some(k) => planning_reward(counts, k, cfg),
        None => Ok(0.0),
    }
}

/// Offline Q-learning over a fixed dataset: `plan_epochs` shuffled sweeps,
/// bootstrapping from the best stored entry of the next state.
pub fn plan_phase(
    dataset: &TrajectoryDataset,
    counts: &ActionCountTable,
    cfg: &PipelineConfig,
    rng: &mut SimRng,
) -> Result<QTable> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    check_rates(cfg.plan_lr, cfg.plan_gamma)?;
    let transitions = dataset.transitions();
    let rewards = transitions
        .iter()
        .map(|t| transition_reward(counts, t, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut q = QTable::new();
    for t in transitions {
        q.ensure(t.s, &[t.a]);
    }
    let mut order: Vec<usize> = (0..transitions.len()).collect();
    for _ in 0..cfg.plan_epochs {
        order.shuffle(rng);
        for &i in &order {
            let t = &transitions[i];
            let next = if t.terminal { 0.0 } else { q.row_max(t.s_next) };
            let target = td_target(rewards[i], next, t.terminal, cfg.plan_gamma);
            q.step_towards(t.s, t.a, target, cfg.plan_lr);
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;

    use super::*;
    use crate::agents::{train_q_agent, RewardSpec, TrainConfig, UniformRandom};
    use crate::game::{Cell, GameConfig};

    fn small() -> PipelineConfig {
        PipelineConfig {
            explore_episodes: 300,
            rollout_transitions: 500,
            victim_action_target: 2_000,
            rollout_shards: 3,
            plan_epochs: 5,
            seed: 11,
            ..PipelineConfig::default()
        }
    }

    fn victim(game: &Game) -> QTable {
        let cfg = TrainConfig::new(300, 0.9, 1);
        train_q_agent(game, &UniformRandom, &RewardSpec::GameReward, &cfg, &mut seed::stream(1, "victim", 0)).unwrap()
    }

    #[test]
    fn planning_reward_examples() {
        let cfg = PipelineConfig::default();
        let mut counts = ActionCountTable::new();
        counts.insert_counts(StateKey(1), vec![5, 5]).unwrap();
        counts.insert_counts(StateKey(2), vec![10, 0]).unwrap();
        assert!((planning_reward(&counts, StateKey(1), &cfg).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert_eq!(planning_reward(&counts, StateKey(2), &cfg).unwrap(), 0.0);
        assert_eq!(planning_reward(&counts, StateKey(3), &cfg).unwrap(), -1.0);
    }

    #[test]
    fn explore_first_step_reward_is_log_arity() {
        let game = Game::new(GameConfig::connect_k(4, 4, 3)).unwrap();
        let cfg = PipelineConfig {
            explore_episodes: 1,
            explore_lr: 1.0,
            explore_epsilon_start: 0.0,
            explore_epsilon_end: 0.0,
            ..small()
        };
        let v = QTable::new();
        let mut rng = SimRng::seed_from_u64(0);
        let q = explore_phase(&game, &v, &cfg, &mut rng).unwrap();
        // The victim opens, so the first attacker state has one piece. Later
        // rewards are non-negative, so the stored value is at least ln 4.
        let first: Vec<f64> = q
            .sorted_entries()
            .into_iter()
            .filter(|(k, _, _)| game.state_from_key(*k).unwrap().board().iter().filter(|c| **c != Cell::Empty).count() == 1)
            .map(|e| e.2)
            .collect();
        assert_eq!(first.len(), 1);
        let first = first[0];
        assert!(first >= 4f64.ln());
    }

    #[test]
    fn rollout_contract() {
        let game = Game::new(GameConfig::connect_k(4, 4, 3)).unwrap();
        let v = victim(&game);
        let cfg = small();
        let explorer = explore_phase(&game, &v, &cfg, &mut seed::stream(2, "e", 0)).unwrap();
        let run = |exec| rollout_phase(&game, &explorer, &v, &cfg, &mut seed::stream(2, "r", 0), exec).unwrap();
        let r = run(Exec::Sequential);
        assert_eq!(r, run(Exec::Parallel));
        assert!(r.dataset.len() >= 500);
        assert!(r.counts.total_observations() >= 2_000);
        for traj in r.dataset.trajectories() {
            assert!(traj.last().unwrap().terminal);
            assert!(traj[..traj.len() - 1].iter().all(|t| !t.terminal));
            for w in traj.windows(2) {
                assert_eq!(w[0].s_next, w[1].s);
            }
        }
        for (key, c) in r.counts.iter() {
            let s = game.state_from_key(key).unwrap();
            assert_eq!(c.len(), game.legal_actions(&s).len());
        }
    }

    #[test]
    fn pipeline_never_reads_rewards() {
        let plain = Game::new(GameConfig::connect_k(4, 4, 3)).unwrap();
        let v = victim(&plain);
        let (game, probe) = Game::instrumented(&plain);
        let cfg = small();
        let mut rng = seed::stream(3, "p", 0);
        let explorer = explore_phase(&game, &v, &cfg, &mut rng).unwrap();
        let r = rollout_phase(&game, &explorer, &v, &cfg, &mut rng, Exec::Parallel).unwrap();
        plan_phase(&r.dataset, &r.counts, &cfg, &mut rng).unwrap();
        assert_eq!(probe.reads(), 0);
    }

    #[test]
    fn plan_contract() {
        let cfg = small();
        let empty = TrajectoryDataset::new();
        let counts = ActionCountTable::new();
        let mut rng = SimRng::seed_from_u64(0);
        assert_eq!(plan_phase(&empty, &counts, &cfg, &mut rng), Err(Error::EmptyDataset));

        let game = Game::new(GameConfig::connect_k(4, 4, 3)).unwrap();
        let v = victim(&game);
        let explorer = explore_phase(&game, &v, &cfg, &mut seed::stream(4, "e", 0)).unwrap();
        let r = rollout_phase(&game, &explorer, &v, &cfg, &mut seed::stream(4, "r", 0), Exec::Parallel).unwrap();
        let a = plan_phase(&r.dataset, &r.counts, &cfg, &mut seed::stream(4, "p", 0)).unwrap();
        let b = plan_phase(&r.dataset, &r.counts, &cfg, &mut seed::stream(4, "p", 0)).unwrap();
        assert_eq!(a, b);
        let max_h = 4f64.ln() + 1e-12;
        for (_, _, v) in a.sorted_entries() {
            // Discounted sums of rewards in [-1, ln 4] with gamma 0.5.
            assert!((-2.0 - 1e-12..=2.0 * max_h).contains(&v));
        }
    }

    #[test]
    fn plan_full_step_on_chain() {
        // s0 -a0-> s1 -a0-> end, with faced states observed uniformly.
        let mut counts = ActionCountTable::new();
        counts.insert_counts(StateKey(10), vec![1, 1]).unwrap();
        let t = |s: u128, n: u128, terminal, faced: Option<u128>| Transition {
            s: StateKey(s),
            a: ActionId(0),
            s_next: StateKey(n),
            terminal,
            faced: faced.map(StateKey),
        };
        let d = TrajectoryDataset::from_transitions(vec![t(0, 1, false, Some(10)), t(1, 2, true, None)]);
        let cfg = PipelineConfig { plan_lr: 1.0, plan_epochs: 3, ..PipelineConfig::default() };
        let q = plan_phase(&d, &counts, &cfg, &mut SimRng::seed_from_u64(9)).unwrap();
        assert_eq!(q.value(StateKey(1), ActionId(0)), 0.0);
        assert!((q.value(StateKey(0), ActionId(0)) - 2f64.ln()).abs() < 1e-12);
    }
}
