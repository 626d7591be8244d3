//! Action selection over Q-tables and the [`Policy`] abstraction shared by
//! training, rollouts and evaluation.
//!
//! Random draws are made in a fixed order: an epsilon-greedy choice draws one
//! `f64` in `[0, 1)` and, when that falls below epsilon, one uniform index
//! over the legal actions. A softmax sample draws one `f64`.

use rand::Rng;

use super::qtable::{argmax, QTable};
use crate::entropy::ProbVector;
use crate::error::{Error, Result};
use crate::game::{ActionId, Game, GameState};
use crate::seed::SimRng;

fn legal_or_terminal(game: &Game, state: &GameState) -> Result<Vec<ActionId>> {
    let legal = game.legal_actions(state);
    if legal.is_empty() {
        Err(Error::TerminalState)
    } else {
        Ok(legal)
    }
}

pub fn greedy_action(q: &QTable, game: &Game, state: &GameState) -> Result<ActionId> {
    let legal = legal_or_terminal(game, state)?;
    let values = q.values(game.canonical_key(state), &legal);
    Ok(legal[argmax(&values).expect("non-empty")])
}

pub fn epsilon_greedy_action(
    q: &QTable,
    game: &Game,
    state: &GameState,
    epsilon: f64,
    rng: &mut SimRng,
) -> Result<ActionId> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon}")));
    }
    let legal = legal_or_terminal(game, state)?;
    if rng.gen::<f64>() < epsilon {
        return Ok(legal[rng.gen_range(0..legal.len())]);
    }
    let values = q.values(game.canonical_key(state), &legal);
    Ok(legal[argmax(&values).expect("non-empty")])
}

/// Softmax with unit temperature over raw values, shifted by the max.
pub fn softmax(values: &[f64]) -> ProbVector {
    let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = values.iter().map(|v| (v - m).exp()).collect();
    let z: f64 = w.iter().sum();
    ProbVector::new(w.iter().map(|x| x / z).collect()).expect("softmax of finite values")
}

pub fn softmax_policy(q: &QTable, game: &Game, state: &GameState) -> Result<ProbVector> {
    let legal = legal_or_terminal(game, state)?;
    Ok(softmax(&q.values(game.canonical_key(state), &legal)))
}

/// Max over legal actions; 0 at terminal and unvisited states.
pub fn state_value(q: &QTable, game: &Game, state: &GameState) -> f64 {
    let legal = game.legal_actions(state);
    if legal.is_empty() {
        return 0.0;
    }
    q.values(game.canonical_key(state), &legal)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Draws an index from a distribution with one uniform draw.
pub fn sample_index(p: &ProbVector, rng: &mut SimRng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &x) in p.probs().iter().enumerate() {
        acc += x;
        if u < acc {
            return i;
        }
    }
    p.probs().iter().rposition(|&x| x > 0.0).unwrap_or(0)
}

/// A way of picking moves.
pub trait Policy: Sync {
    fn choose(&self, game: &Game, state: &GameState, rng: &mut SimRng) -> Result<ActionId>;
}

impl<P: Policy + ?Sized> Policy for &P {
    fn choose(&self, game: &Game, state: &GameState, rng: &mut SimRng) -> Result<ActionId> {
        (**self).choose(game, state, rng)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct UniformRandom;

impl Policy for UniformRandom {
    fn choose(&self, game: &Game, state: &GameState, rng: &mut SimRng) -> Result<ActionId> {
        let legal = legal_or_terminal(game, state)?;
        Ok(legal[rng.gen_range(0..legal.len())])
    }
}

/// Always the lowest legal action.
#[derive(Debug, Clone, Copy, Default)]
pub struct FirstLegal;

impl Policy for FirstLegal {
    fn choose(&self, game: &Game, state: &GameState, _rng: &mut SimRng) -> Result<ActionId> {
        Ok(legal_or_terminal(game, state)?[0])
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Greedy<'a>(pub &'a QTable);

impl Policy for Greedy<'_> {
    fn choose(&self, game: &Game, state: &GameState, _rng: &mut SimRng) -> Result<ActionId> {
        greedy_action(self.0, game, state)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EpsilonGreedy<'a> {
    pub q: &'a QTable,
    pub epsilon: f64,
}

impl Policy for EpsilonGreedy<'_> {
    fn choose(&self, game: &Game, state: &GameState, rng: &mut SimRng) -> Result<ActionId> {
        epsilon_greedy_action(self.q, game, state, self.epsilon, rng)
    }
}

/// Samples from the softmax of the table's values.
#[derive(Debug, Clone, Copy)]
pub struct Softmax<'a>(pub &'a QTable);

impl Policy for Softmax<'_> {
    fn choose(&self, game: &Game, state: &GameState, rng: &mut SimRng) -> Result<ActionId> {
        let legal = legal_or_terminal(game, state)?;
        let p = crate::agents::policy::softmax(&self.0.values(game.canonical_key(state), &legal));
        Ok(legal[sample_index(&p, rng)])
    }
}

/// How a frozen victim turns its Q-table into moves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VictimBehavior {
    Greedy,
    Softmax,
    EpsilonGreedy(f64),
}

impl VictimBehavior {
    pub fn policy<'a>(self, q: &'a QTable) -> Box<dyn Policy + 'a> {
        match self {
            VictimBehavior::Greedy => Box::new(Greedy(q)),
            VictimBehavior::Softmax => Box::new(Softmax(q)),
            VictimBehavior::EpsilonGreedy(epsilon) => Box::new(EpsilonGreedy { q, epsilon }),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "greedy" => Some(VictimBehavior::Greedy),
            "softmax" => Some(VictimBehavior::Softmax),
            _ => s
                .strip_prefix("epsilon-greedy:")
                .and_then(|e| e.parse().ok())
                .filter(|e: &f64| (0.0..=1.0).contains(e))
                .map(VictimBehavior::EpsilonGreedy),
        }
    }

    pub fn name(self) -> String {
        match self {
            VictimBehavior::Greedy => "greedy".into(),
            VictimBehavior::Softmax => "softmax".into(),
            VictimBehavior::EpsilonGreedy(e) => format!("epsilon-greedy:{e}"),
        }
    }
}
