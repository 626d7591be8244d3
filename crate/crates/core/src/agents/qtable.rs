use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::game::{ActionId, StateKey};

/// Tabular action values. Absent entries read as 0.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QTable {
    rows: HashMap<StateKey, Vec<(ActionId, f64)>>,
}

impl QTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value(&self, key: StateKey, action: ActionId) -> f64 {
        self.rows
            .get(&key)
            .and_then(|row| {
                row.binary_search_by_key(&action, |e| e.0)
                    .ok()
                    .map(|i| row[i].1)
            })
            .unwrap_or(0.0)
    }

    pub fn values(&self, key: StateKey, actions: &[ActionId]) -> Vec<f64> {
        match self.rows.get(&key) {
            None => vec![0.0; actions.len()],
            Some(_) => actions.iter().map(|&a| self.value(key, a)).collect(),
        }
    }

    /// Stored entries of one state, sorted by action.
    pub fn row(&self, key: StateKey) -> Option<&[(ActionId, f64)]> {
        self.rows.get(&key).map(Vec::as_slice)
    }

    /// Max over the stored entries of a state, 0 when none are stored.
    pub fn row_max(&self, key: StateKey) -> f64 {
        self.rows
            .get(&key)
            .and_then(|row| row.iter().map(|e| e.1).reduce(f64::max))
            .unwrap_or(0.0)
    }

    /// Stores an explicit 0 for each action that has no entry yet.
    pub fn ensure(&mut self, key: StateKey, actions: &[ActionId]) {
        for &a in actions {
            self.entry(key, a);
        }
    }

    fn entry(&mut self, key: StateKey, action: ActionId) -> &mut f64 {
        let row = self.rows.entry(key).or_default();
        let i = match row.binary_search_by_key(&action, |e| e.0) {
            Ok(i) => i,
            Err(i) => {
                row.insert(i, (action, 0.0));
                i
            }
        };
        &mut row[i].1
    }

    pub fn set(&mut self, key: StateKey, action: ActionId, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFiniteInput(format!("q-value {value}")));
        }
        *self.entry(key, action) = value;
        Ok(())
    }

    /// Moves the entry a fraction `lr` of the way towards `target`; a full
    /// step stores the target exactly.
    pub fn step_towards(&mut self, key: StateKey, action: ActionId, target: f64, lr: f64) -> f64 {
        let v = self.entry(key, action);
        *v = if lr == 1.0 { target } else { *v + lr * (target - *v) };
        *v
    }

    pub fn states(&self) -> usize {
        self.rows.len()
    }

    pub fn entries(&self) -> usize {
        self.rows.values().map(Vec::len).sum()
    }

    pub fn is_all_default(&self) -> bool {
        self.rows.values().flatten().all(|e| e.1 == 0.0)
    }

    /// All entries ordered by (state, action).
    pub fn sorted_entries(&self) -> Vec<(StateKey, ActionId, f64)> {
        let mut keys: Vec<_> = self.rows.keys().copied().collect();
        keys.sort_unstable();
        keys.into_iter()
            .flat_map(|k| self.rows[&k].iter().map(move |&(a, v)| (k, a, v)))
            .collect()
    }
}

/// Index of the largest value, the lowest index among ties.
pub fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if best.is_none_or(|b| v > values[b]) {
            best = Some(i);
        }
    }
    best
}

/// Index of the smallest value, the lowest index among ties.
pub fn argmin(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if best.is_none_or(|b| v < values[b]) {
            best = Some(i);
        }
    }
    best
}

/// One-step temporal-difference target.
pub fn td_target(reward: f64, next_value: f64, terminal: bool, gamma: f64) -> f64 {
    if terminal {
        reward
    } else {
        reward + gamma * next_value
    }
}
