use std::collections::{HashMap, VecDeque};

use crate::agents::qtable::{argmax, argmin};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::game::{ActionId, Game, GameState, Player, StateKey};

pub const DEFAULT_STATE_CAP: usize = 500_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub gamma: f64,
    /// Stop once no value moves by more than this in a sweep.
    pub tol: f64,
    pub state_cap: usize,
    pub max_sweeps: usize,
    pub exec: Exec,
}

impl SolveOptions {
    pub fn new(gamma: f64) -> Self {
        SolveOptions {
            gamma,
            tol: 0.0,
            state_cap: DEFAULT_STATE_CAP,
            max_sweeps: 10_000,
            exec: Exec::Sequential,
        }
    }
}

/// Minimax values of every reachable state from one player's perspective,
/// with `Q(s, a) = gamma * (R(s -> s') + V(s'))` and `V = 0` at terminal
/// states.
#[derive(Debug, Clone)]
pub struct ValueMap {
    perspective: Player,
    index: HashMap<StateKey, usize>,
    states: Vec<GameState>,
    keys: Vec<StateKey>,
    /// (action, successor index, reward to the perspective player).
    succ: Vec<Vec<(ActionId, usize, f64)>>,
    values: Vec<f64>,
    best: Vec<Option<ActionId>>,
    pub sweeps: usize,
}

impl ValueMap {
    pub fn perspective(&self) -> Player {
        self.perspective
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn value(&self, key: StateKey) -> Option<f64> {
        self.index.get(&key).map(|&i| self.values[i])
    }

    /// The mover's minimax action, lowest action index among ties.
    pub fn best_action(&self, key: StateKey) -> Option<ActionId> {
        self.index.get(&key).and_then(|&i| self.best[i])
    }

    pub fn state(&self, key: StateKey) -> Option<&GameState> {
        self.index.get(&key).map(|&i| &self.states[i])
    }

    /// `(key, value)` in key order.
    pub fn sorted(&self) -> Vec<(StateKey, f64)> {
        let mut v: Vec<_> = self.keys.iter().copied().zip(self.values.iter().copied()).collect();
        v.sort_unstable_by_key(|e| e.0);
        v
    }
}

pub fn value_iteration(game: &Game, perspective: Player, opts: &SolveOptions) -> Result<ValueMap> {
    if !(opts.gamma > 0.0 && opts.gamma < 1.0) {
        return Err(Error::InvalidParameter(format!("gamma {} outside (0, 1)", opts.gamma)));
    }
    if !(opts.tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {}", opts.tol)));
    }
    let mut map = explore(game, perspective, opts.state_cap)?;
    let gamma = opts.gamma;
    for sweep in 1..=opts.max_sweeps {
        let old = &map.values;
        let succ = &map.succ;
        let states = &map.states;
        let new: Vec<f64> = opts.exec.map(map.len(), |i| {
            if succ[i].is_empty() {
                return 0.0;
            }
            let qs = map_q(&succ[i], old, gamma);
            let pick = if states[i].mover() == perspective { argmax(&qs) } else { argmin(&qs) };
            qs[pick.expect("non-empty")]
        });
        let delta = new.iter().zip(old).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        map.values = new;
        map.sweeps = sweep;
        if delta <= opts.tol {
            break;
        }
    }
    for i in 0..map.len() {
        if map.succ[i].is_empty() {
            continue;
        }
        let qs = map_q(&map.succ[i], &map.values, gamma);
        let pick = if map.states[i].mover() == perspective { argmax(&qs) } else { argmin(&qs) };
        map.best[i] = pick.map(|j| map.succ[i][j].0);
    }
    Ok(map)
}

fn map_q(succ: &[(ActionId, usize, f64)], values: &[f64], gamma: f64) -> Vec<f64> {
    succ.iter().map(|&(_, j, r)| gamma * (r + values[j])).collect()
}

fn explore(game: &Game, perspective: Player, cap: usize) -> Result<ValueMap> {
    let root = game.initial_state();
    let mut map = ValueMap {
        perspective,
        index: HashMap::from([(game.canonical_key(&root), 0)]),
        keys: vec![game.canonical_key(&root)],
        states: vec![root],
        succ: Vec::new(),
        values: Vec::new(),
        best: Vec::new(),
        sweeps: 0,
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let s = map.states[i].clone();
        let mut edges = Vec::new();
        for a in game.legal_actions(&s) {
            let step = game.apply_action(&s, a)?;
            let key = game.canonical_key(&step.next);
            let j = match map.index.get(&key) {
                Some(&j) => j,
                None => {
                    let j = map.states.len();
                    if j >= cap {
                        return Err(Error::StateSpaceCapExceeded(cap));
                    }
                    map.index.insert(key, j);
                    map.keys.push(key);
                    map.states.push(step.next.clone());
                    queue.push_back(j);
                    j
                }
            };
            edges.push((a, j, step.reward(perspective) as f64));
        }
        if map.succ.len() <= i {
            map.succ.resize(i + 1, Vec::new());
        }
        map.succ[i] = edges;
    }
    map.succ.resize(map.states.len(), Vec::new());
    map.values = vec![0.0; map.states.len()];
    map.best = vec![None; map.states.len()];
    Ok(map)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremCheck {
    pub seat: Player,
    pub key: StateKey,
    pub value: f64,
    /// `log_gamma(value)`.
    pub log_value: f64,
    /// Plies along the minimax line until the game ended.
    pub steps: u32,
    pub winner: Option<Player>,
    pub pass: bool,
}

pub const THEOREM_TOLERANCE: f64 = 1e-9;

/// For every state a seat wins under minimax play (`V > 0`), follows the
/// minimax line and checks that the win takes exactly `log_gamma V` plies.
pub fn verify_theorem_one(game: &Game, seats: &[Player], opts: &SolveOptions) -> Result<Vec<TheoremCheck>> {
    let mut out = Vec::new();
    for &seat in seats {
        let map = value_iteration(game, seat, opts)?;
        for (key, value) in map.sorted() {
            let s = &map.states[map.index[&key]];
            if value <= 0.0 || s.is_terminal() {
                continue;
            }
            let (steps, winner) = follow(game, &map, s)?;
            let log_value = value.ln() / opts.gamma.ln();
            let pass = winner == Some(seat) && (steps as f64 - log_value).abs() <= THEOREM_TOLERANCE;
            out.push(TheoremCheck { seat, key, value, log_value, steps, winner, pass });
        }
    }
    Ok(out)
}

fn follow(game: &Game, map: &ValueMap, start: &GameState) -> Result<(u32, Option<Player>)> {
    let mut s = start.clone();
    let mut steps = 0;
    loop {
        let a = map.best_action(game.canonical_key(&s)).ok_or(Error::TerminalState)?;
        let step = game.apply_action(&s, a)?;
        steps += 1;
        if step.terminal {
            return Ok((steps, step.winner()));
        }
        s = step.next;
    }
}
