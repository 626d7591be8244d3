use crate::agents::{Policy, UniformRandom};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::game::{Game, Player};
use crate::seed::{self, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchRecord {
    /// `None` for a draw.
    pub winner: Option<Player>,
    pub moves: u32,
    /// Ply at which the attacker replaced the random opener, 0 if never.
    pub swap_ply: u32,
}

pub fn play_match(
    game: &Game,
    p1: &dyn Policy,
    p2: &dyn Policy,
    rng: &mut SimRng,
) -> Result<MatchRecord> {
    let mut s = game.initial_state();
    loop {
        let policy = if s.mover() == Player::P1 { p1 } else { p2 };
        let a = policy.choose(game, &s, rng)?;
        let step = game.apply_action(&s, a)?;
        if step.terminal {
            return Ok(MatchRecord {
                winner: step.winner(),
                moves: step.next.move_count(),
                swap_ply: 0,
            });
        }
        s = step.next;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    /// Random moves per player before the attacker takes over.
    pub opening_moves: u32,
    pub n_games: usize,
    pub seed: u64,
    pub victim_seat: Player,
    /// Fresh openings tried per record before giving up.
    pub max_attempts: u64,
}

impl EvalConfig {
    pub fn new(n_games: usize, seed: u64) -> Self {
        EvalConfig {
            opening_moves: 5,
            n_games,
            seed,
            victim_seat: Player::P1,
            max_attempts: 1000,
        }
    }

    pub fn attacker_seat(&self) -> Player {
        self.victim_seat.other()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapInRecord {
    pub game_id: usize,
    /// Seed of the stream that produced this record.
    pub seed: u64,
    pub record: MatchRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapInReport {
    pub records: Vec<SwapInRecord>,
    /// Openings discarded because the game ended before the swap.
    pub retries: u64,
}

impl SwapInReport {
    pub fn matches(&self) -> Vec<MatchRecord> {
        self.records.iter().map(|r| r.record).collect()
    }
}

/// Victim (greedy from move one) against a uniform-random opener that is
/// replaced by the attacker after `opening_moves` moves per side. Openings
/// that finish the game before the swap are replayed with a fresh stream.
pub fn evaluate_swap_in(
    game: &Game,
    victim: &dyn Policy,
    attacker: &dyn Policy,
    cfg: &EvalConfig,
    exec: Exec,
) -> Result<SwapInReport> {
    if cfg.n_games == 0 {
        return Err(Error::InvalidParameter("n_games must be at least 1".into()));
    }
    let swap_ply = 2 * cfg.opening_moves;
    let per_game = exec.try_map(cfg.n_games, |game_id| {
        for attempt in 0..cfg.max_attempts {
            let seed = seed::stream_seed(cfg.seed, "swap-in", ((game_id as u64) << 20) | attempt);
            let mut rng = <SimRng as rand::SeedableRng>::seed_from_u64(seed);
            if let Some(record) = swap_in_game(game, victim, attacker, cfg.victim_seat, swap_ply, &mut rng)? {
                return Ok((SwapInRecord { game_id, seed, record }, attempt));
            }
        }
        Err(Error::OpeningTooLong(cfg.max_attempts))
    })?;
    let retries = per_game.iter().map(|(_, a)| a).sum();
    Ok(SwapInReport {
        records: per_game.into_iter().map(|(r, _)| r).collect(),
        retries,
    })
}

fn swap_in_game(
    game: &Game,
    victim: &dyn Policy,
    attacker: &dyn Policy,
    victim_seat: Player,
    swap_ply: u32,
    rng: &mut SimRng,
) -> Result<Option<MatchRecord>> {
    let mut s = game.initial_state();
    loop {
        let ply = s.move_count();
        let a = if s.mover() == victim_seat {
            victim.choose(game, &s, rng)?
        } else if ply < swap_ply {
            UniformRandom.choose(game, &s, rng)?
        } else {
            attacker.choose(game, &s, rng)?
        };
        let step = game.apply_action(&s, a)?;
        if step.terminal {
            if step.next.move_count() <= swap_ply && swap_ply > 0 {
                return Ok(None);
            }
            return Ok(Some(MatchRecord {
                winner: step.winner(),
                moves: step.next.move_count(),
                swap_ply,
            }));
        }
        s = step.next;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsSummary {
    pub games: usize,
    pub attacker_win_rate: f64,
    pub victim_win_rate: f64,
    pub draw_rate: f64,
    pub mean_moves: f64,
    /// Sample standard deviation (n - 1 denominator), 0 for a single game.
    pub std_moves: f64,
}

pub fn summarize(records: &[MatchRecord], attacker: Player) -> Result<MetricsSummary> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let n = records.len() as f64;
    let rate = |f: &dyn Fn(&MatchRecord) -> bool| records.iter().filter(|r| f(r)).count() as f64 / n;
    let mean = records.iter().map(|r| r.moves as f64).sum::<f64>() / n;
    let var = if records.len() > 1 {
        records.iter().map(|r| (r.moves as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(MetricsSummary {
        games: records.len(),
        attacker_win_rate: rate(&|r| r.winner == Some(attacker)),
        victim_win_rate: rate(&|r| r.winner == Some(attacker.other())),
        draw_rate: rate(&|r| r.winner.is_none()),
        mean_moves: mean,
        std_moves: var.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::{FirstLegal, Greedy, QTable};
    use crate::game::GameConfig;

    fn rec(winner: Option<Player>, moves: u32) -> MatchRecord {
        MatchRecord { winner, moves, swap_ply: 0 }
    }

    #[test]
    fn summary_examples() {
        let all = vec![rec(Some(Player::P2), 10); 4];
        let s = summarize(&all, Player::P2).unwrap();
        assert_eq!((s.attacker_win_rate, s.mean_moves, s.std_moves), (1.0, 10.0, 0.0));
        let s = summarize(&[rec(None, 8), rec(Some(Player::P1), 12)], Player::P2).unwrap();
        assert_eq!(s.mean_moves, 10.0);
        assert!((s.std_moves - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!((s.draw_rate, s.victim_win_rate), (0.5, 0.5));
        assert_eq!(summarize(&[], Player::P1), Err(Error::EmptyRecords));
    }

    #[test]
    fn random_matches_terminate_and_repeat() {
        let game = Game::new(GameConfig::connect_k(4, 4, 3)).unwrap();
        let mut draws = 0;
        for i in 0..2000 {
            let mut rng = seed::stream(5, "match", i);
            let r = play_match(&game, &UniformRandom, &UniformRandom, &mut rng).unwrap();
            assert!(r.moves as usize <= game.config().max_moves);
            let mut rng = seed::stream(5, "match", i);
            assert_eq!(r, play_match(&game, &UniformRandom, &UniformRandom, &mut rng).unwrap());
            draws += r.winner.is_none() as u32;
        }
        assert!(draws < 2000);
    }

    #[test]
    fn swap_in_contract() {
        let game = Game::new(GameConfig::connect_k(4, 4, 3)).unwrap();
        let q = QTable::new();
        let mut cfg = EvalConfig::new(100, 3);
        cfg.opening_moves = 1;
        let a = evaluate_swap_in(&game, &Greedy(&q), &FirstLegal, &cfg, Exec::Sequential).unwrap();
        let b = evaluate_swap_in(&game, &Greedy(&q), &FirstLegal, &cfg, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.records.len(), 100);
        assert!(a.records.iter().all(|r| r.record.swap_ply == 2 && r.record.moves > 2));
        let ids: Vec<_> = a.records.iter().map(|r| r.game_id).collect();
        assert_eq!(ids, (0..100).collect::<Vec<_>>());
    }

    #[test]
    fn zero_opening_is_a_plain_match() {
        let game = Game::new(GameConfig::connect_k(4, 4, 3)).unwrap();
        let q = QTable::new();
        let mut cfg = EvalConfig::new(5, 3);
        cfg.opening_moves = 0;
        let rep = evaluate_swap_in(&game, &Greedy(&q), &FirstLegal, &cfg, Exec::Sequential).unwrap();
        let mut rng = seed::stream(0, "unused", 0);
        let direct = play_match(&game, &Greedy(&q), &FirstLegal, &mut rng).unwrap();
        for r in rep.records {
            assert_eq!(r.record, direct);
        }
        assert_eq!(rep.retries, 0);
    }

    #[test]
    fn overlong_opening_is_an_error() {
        let game = Game::new(GameConfig::connect_k(2, 2, 2)).unwrap();
        let mut cfg = EvalConfig::new(1, 0);
        cfg.opening_moves = 5;
        cfg.max_attempts = 3;
        let q = QTable::new();
        assert_eq!(
            evaluate_swap_in(&game, &Greedy(&q), &UniformRandom, &cfg, Exec::Sequential),
            Err(Error::OpeningTooLong(3))
        );
        cfg.n_games = 0;
        assert!(evaluate_swap_in(&game, &Greedy(&q), &UniformRandom, &cfg, Exec::Sequential).is_err());
    }
}
