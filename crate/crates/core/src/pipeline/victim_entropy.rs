use std::collections::HashMap;

use crate::agents::Policy;
use crate::entropy::{entropy_table_distance, table_entropy, ActionCountTable, EntropyKind, EntropyTable};
use crate::error::{Error, Result};
use crate::game::{Game, Player, StateKey};
use crate::seed::SimRng;

#[derive(Debug, Clone, PartialEq)]
pub struct VictimEntropyConfig {
    /// Stop once an episode moves the estimates by less than this in total.
    pub epsilon: f64,
    pub kind: EntropyKind,
    pub victim_seat: Player,
    pub episode_budget: u64,
}

impl VictimEntropyConfig {
    pub fn new(epsilon: f64, kind: EntropyKind) -> Self {
        VictimEntropyConfig {
            epsilon,
            kind,
            victim_seat: Player::P1,
            episode_budget: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VictimEntropyEstimate {
    pub entropies: EntropyTable,
    pub counts: ActionCountTable,
    pub episodes: u64,
}

/// Estimates the victim's per-state action entropy from play against
/// `explorer`.
///
/// Two tables are kept per visited state: the current estimate and the one
/// it replaced. A state enters with previous 0 and current `epsilon`, and on
/// every visit the previous value takes the current one before the new
/// observation is folded in. The loop ends after the first episode where the
/// summed gap between the two tables is below `epsilon`, so a state seen only
/// once still counts `epsilon` against convergence.
pub fn learn_victim_entropy(
    game: &Game,
    victim: &dyn Policy,
    explorer: &dyn Policy,
    cfg: &VictimEntropyConfig,
    rng: &mut SimRng,
) -> Result<VictimEntropyEstimate> {
    let eps = cfg.epsilon;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("epsilon {eps} must be positive")));
    }
    if cfg.episode_budget == 0 {
        return Err(Error::InvalidParameter("episode budget must be positive".into()));
    }
    let mut tables: HashMap<StateKey, (f64, f64)> = HashMap::new();
    let mut counts = ActionCountTable::new();
    // Running sum of |previous - current|; confirmed exactly before stopping.
    let mut gap = 0.0;
    for episode in 1..=cfg.episode_budget {
        let mut s = game.initial_state();
        while !s.is_terminal() {
            let a = if s.mover() == cfg.victim_seat {
                let a = victim.choose(game, &s, rng)?;
                let key = game.canonical_key(&s);
                let legal = game.legal_actions(&s);
                let slot = legal.iter().position(|&b| b == a).ok_or(Error::IllegalAction(a))?;
                let (h0, h1) = tables.entry(key).or_insert((0.0, eps));
                gap -= (*h0 - *h1).abs();
                *h0 = *h1;
                counts.record(key, slot, legal.len())?;
                *h1 = table_entropy(&counts, key, cfg.kind)?;
                gap += (*h0 - *h1).abs();
                a
            } else {
                explorer.choose(game, &s, rng)?
            };
            s = game.apply_action(&s, a)?.next;
        }
        if gap < eps && !tables.is_empty() {
            let h0: EntropyTable = tables.iter().map(|(k, v)| (*k, v.0)).collect();
            let h1: EntropyTable = tables.iter().map(|(k, v)| (*k, v.1)).collect();
            gap = entropy_table_distance(&h0, &h1)?;
            if gap < eps {
                return Ok(VictimEntropyEstimate {
                    entropies: h1,
                    counts,
                    episodes: episode,
                });
            }
        }
    }
    Err(Error::NonTerminatingBudget(cfg.episode_budget))
}
