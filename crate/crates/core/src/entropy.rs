//! Shannon and Rényi entropy of action distributions, and the per-state
//! count and entropy tables used to estimate a victim's policy entropy from
//! observed actions.
//!
//! All logarithms are natural; entropies are in nats. `0 * ln 0` is taken
//! as 0, and zero-probability entries contribute nothing to Rényi sums.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::game::StateKey;

const SUM_TOLERANCE: f64 = 1e-9;

/// A probability vector over the legal actions of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty vector".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!("entry {p}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("sum {sum}")));
        }
        Ok(ProbVector(probs))
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs at least one outcome");
        ProbVector(vec![1.0 / n as f64; n])
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyKind {
    Shannon,
    Renyi(f64),
}

impl EntropyKind {
    /// Rényi of the given order, with order 1 mapped to its Shannon limit.
    pub fn from_order(order: f64) -> Result<Self> {
        if order == 1.0 {
            Ok(EntropyKind::Shannon)
        } else if order > 0.0 && order.is_finite() {
            Ok(EntropyKind::Renyi(order))
        } else {
            Err(Error::InvalidOrder(order))
        }
    }

    pub fn of(self, p: &ProbVector) -> Result<f64> {
        match self {
            EntropyKind::Shannon => Ok(shannon_entropy(p)),
            EntropyKind::Renyi(order) => renyi_entropy(p, order),
        }
    }
}

pub fn shannon_entropy(p: &ProbVector) -> f64 {
    let h: f64 = p
        .probs()
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.ln())
        .sum();
    h.max(0.0)
}

pub fn renyi_entropy(p: &ProbVector, order: f64) -> Result<f64> {
    if !(order > 0.0) || order == 1.0 || !order.is_finite() {
        return Err(Error::InvalidOrder(order));
    }
    let s: f64 = if order == 0.5 {
        p.probs().iter().map(|x| x.sqrt()).sum()
    } else {
        p.probs()
            .iter()
            .filter(|&&x| x > 0.0)
            .map(|x| x.powf(order))
            .sum()
    };
    Ok((s.ln() / (1.0 - order)).max(0.0))
}

pub fn empirical_distribution(counts: &[u64]) -> Result<ProbVector> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyCounts);
    }
    let t = total as f64;
    Ok(ProbVector(counts.iter().map(|&c| c as f64 / t).collect()))
}

/// Per-state victim action counts, one slot per legal action.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ActionCountTable {
    counts: HashMap<StateKey, Vec<u64>>,
    total_observations: u64,
}

impl ActionCountTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total_observations(&self) -> u64 {
        self.total_observations
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn get(&self, key: StateKey) -> Option<&[u64]> {
        self.counts.get(&key).map(Vec::as_slice)
    }

    pub fn observations(&self, key: StateKey) -> u64 {
        self.get(key).map_or(0, |c| c.iter().sum())
    }

    pub fn iter(&self) -> impl Iterator<Item = (StateKey, &[u64])> {
        self.counts.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    /// Entries sorted by key.
    pub fn sorted(&self) -> Vec<(StateKey, &[u64])> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_unstable_by_key(|(k, _)| *k);
        v
    }

    pub fn record(&mut self, key: StateKey, slot: usize, n_actions: usize) -> Result<()> {
        if slot >= n_actions {
            return Err(Error::SlotOutOfRange { slot, n_actions });
        }
        let row = self
            .counts
            .entry(key)
            .or_insert_with(|| vec![0; n_actions]);
        if row.len() != n_actions {
            return Err(Error::ActionArityMismatch {
                stored: row.len(),
                given: n_actions,
            });
        }
        row[slot] += 1;
        self.total_observations += 1;
        Ok(())
    }

    /// Inserts a whole count vector, as read back from disk.
    pub fn insert_counts(&mut self, key: StateKey, counts: Vec<u64>) -> Result<()> {
        if counts.is_empty() {
            return Err(Error::InvalidParameter("empty count vector".into()));
        }
        let added: u64 = counts.iter().sum();
        if let Some(old) = self.counts.insert(key, counts) {
            self.total_observations -= old.iter().sum::<u64>();
        }
        self.total_observations += added;
        Ok(())
    }

    /// Entry-wise addition of another table.
    pub fn merge(&mut self, other: &ActionCountTable) -> Result<()> {
        for (key, counts) in other.sorted() {
            match self.counts.get_mut(&key) {
                Some(row) if row.len() != counts.len() => {
                    return Err(Error::ActionArityMismatch {
                        stored: row.len(),
                        given: counts.len(),
                    })
                }
                Some(row) => row.iter_mut().zip(counts).for_each(|(a, b)| *a += b),
                None => {
                    self.counts.insert(key, counts.to_vec());
                }
            }
        }
        self.total_observations += other.total_observations;
        Ok(())
    }
}

/// Returns `record` as a new table, leaving the input untouched.
pub fn record_victim_action(
    table: &ActionCountTable,
    key: StateKey,
    action_slot: usize,
    n_actions: usize,
) -> Result<ActionCountTable> {
    let mut out = table.clone();
    out.record(key, action_slot, n_actions)?;
    Ok(out)
}

/// Entropy of the empirical victim distribution at `key`.
pub fn table_entropy(table: &ActionCountTable, key: StateKey, kind: EntropyKind) -> Result<f64> {
    let counts = table.get(key).ok_or(Error::UnknownState)?;
    let p = empirical_distribution(counts).map_err(|_| Error::UnknownState)?;
    kind.of(&p)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EntropyTable {
    entropies: HashMap<StateKey, f64>,
}

impl EntropyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: StateKey) -> Option<f64> {
        self.entropies.get(&key).copied()
    }

    pub fn insert(&mut self, key: StateKey, value: f64) {
        self.entropies.insert(key, value);
    }

    pub fn contains(&self, key: StateKey) -> bool {
        self.entropies.contains_key(&key)
    }

    pub fn len(&self) -> usize {
        self.entropies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entropies.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (StateKey, f64)> + '_ {
        self.entropies.iter().map(|(k, v)| (*k, *v))
    }

    pub fn sorted(&self) -> Vec<(StateKey, f64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_unstable_by_key(|(k, _)| *k);
        v
    }
}

impl FromIterator<(StateKey, f64)> for EntropyTable {
    fn from_iter<I: IntoIterator<Item = (StateKey, f64)>>(iter: I) -> Self {
        EntropyTable {
            entropies: iter.into_iter().collect(),
        }
    }
}

/// Sum of absolute per-state differences between two tables over the same
/// states.
pub fn entropy_table_distance(h0: &EntropyTable, h1: &EntropyTable) -> Result<f64> {
    if h0.len() != h1.len() {
        return Err(Error::KeySetMismatch);
    }
    let mut keys: Vec<_> = h0.entropies.keys().copied().collect();
    keys.sort_unstable();
    keys.iter().try_fold(0.0, |acc, k| {
        let b = h1.get(*k).ok_or(Error::KeySetMismatch)?;
        Ok(acc + (h0.entropies[k] - b).abs())
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn pv(v: &[f64]) -> ProbVector {
        ProbVector::new(v.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn shannon_examples() {
        assert!(close(shannon_entropy(&pv(&[0.5, 0.5])), std::f64::consts::LN_2, 1e-6));
        assert_eq!(shannon_entropy(&pv(&[1.0, 0.0, 0.0])), 0.0);
        // -(0.75 ln 0.75 + 0.25 ln 0.25)
        assert!(close(shannon_entropy(&pv(&[0.75, 0.25])), 0.562335, 1e-6));
    }

    #[test]
    fn renyi_examples() {
        assert!(close(renyi_entropy(&ProbVector::uniform(4), 0.5).unwrap(), 1.386294, 1e-6));
        assert_eq!(renyi_entropy(&pv(&[1.0, 0.0]), 0.5).unwrap(), 0.0);
        // 2 ln(sqrt(0.75) + sqrt(0.25))
        assert!(close(renyi_entropy(&pv(&[0.75, 0.25]), 0.5).unwrap(), 0.623810, 1e-6));
        assert!(close(renyi_entropy(&pv(&[0.75, 0.25]), 2.0).unwrap(), -(0.625f64).ln(), 1e-12));
    }

    #[test]
    fn renyi_rejects_bad_orders() {
        let p = ProbVector::uniform(2);
        for order in [0.0, -1.0, 1.0, f64::NAN] {
            assert!(matches!(renyi_entropy(&p, order), Err(Error::InvalidOrder(_))));
        }
        assert_eq!(EntropyKind::from_order(1.0).unwrap(), EntropyKind::Shannon);
    }

    #[test]
    fn invalid_distributions() {
        assert!(ProbVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbVector::new(vec![1.5, -0.5]).is_err());
        assert!(ProbVector::new(vec![]).is_err());
    }

    #[test]
    fn empirical_examples() {
        assert_eq!(empirical_distribution(&[3, 1]).unwrap().probs(), &[0.75, 0.25]);
        assert_eq!(empirical_distribution(&[0, 0, 5]).unwrap().probs(), &[0.0, 0.0, 1.0]);
        assert_eq!(empirical_distribution(&[0, 0]), Err(Error::EmptyCounts));
    }

    #[test]
    fn recording() {
        let k = StateKey(7);
        let t = record_victim_action(&ActionCountTable::new(), k, 2, 3).unwrap();
        assert_eq!(t.get(k), Some(&[0, 0, 1][..]));
        let mut t = ActionCountTable::new();
        t.record(k, 0, 3).unwrap();
        t.record(k, 0, 3).unwrap();
        assert_eq!(t.get(k), Some(&[2, 0, 0][..]));
        assert_eq!(t.total_observations(), 2);
        assert_eq!(
            t.record(k, 0, 4),
            Err(Error::ActionArityMismatch { stored: 3, given: 4 })
        );
        assert_eq!(
            t.record(k, 3, 3),
            Err(Error::SlotOutOfRange { slot: 3, n_actions: 3 })
        );
        assert_eq!(t.total_observations(), 2);
    }

    #[test]
    fn table_entropy_examples() {
        let mut t = ActionCountTable::new();
        t.insert_counts(StateKey(1), vec![3, 1]).unwrap();
        t.insert_counts(StateKey(2), vec![5, 5]).unwrap();
        t.insert_counts(StateKey(3), vec![0, 0]).unwrap();
        let h = table_entropy(&t, StateKey(1), EntropyKind::Shannon).unwrap();
        assert!(close(h, 0.562335, 1e-6));
        let h = table_entropy(&t, StateKey(2), EntropyKind::Renyi(0.5)).unwrap();
        assert!(close(h, std::f64::consts::LN_2, 1e-6));
        assert_eq!(table_entropy(&t, StateKey(9), EntropyKind::Shannon), Err(Error::UnknownState));
        assert_eq!(table_entropy(&t, StateKey(3), EntropyKind::Shannon), Err(Error::UnknownState));
        assert_eq!(t.total_observations(), 14);
    }

    #[test]
    fn merge_adds_counts() {
        let mut a = ActionCountTable::new();
        a.record(StateKey(1), 0, 2).unwrap();
        let mut b = ActionCountTable::new();
        b.record(StateKey(1), 1, 2).unwrap();
        b.record(StateKey(2), 0, 1).unwrap();
        a.merge(&b).unwrap();
        assert_eq!(a.get(StateKey(1)), Some(&[1, 1][..]));
        assert_eq!(a.total_observations(), 3);
        let mut c = ActionCountTable::new();
        c.record(StateKey(2), 0, 3).unwrap();
        assert!(a.merge(&c).is_err());
    }

    #[test]
    fn distance_examples() {
        let h0: EntropyTable = [(StateKey(1), 0.5), (StateKey(2), 0.2)].into_iter().collect();
        let h1: EntropyTable = [(StateKey(1), 0.7), (StateKey(2), 0.1)].into_iter().collect();
        assert!(close(entropy_table_distance(&h0, &h1).unwrap(), 0.3, 1e-12));
        assert_eq!(entropy_table_distance(&h0, &h0).unwrap(), 0.0);
        let h2: EntropyTable = [(StateKey(1), 0.7), (StateKey(3), 0.1)].into_iter().collect();
        assert_eq!(entropy_table_distance(&h0, &h2), Err(Error::KeySetMismatch));
    }

    #[test]
    fn empirical_distribution_converges() {
        let q = [0.1, 0.2, 0.3, 0.4];
        let mut rng = ChaCha8Rng::seed_from_u64(20240501);
        let mut counts = [0u64; 4];
        for _ in 0..100_000 {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            let i = q.iter().position(|p| { acc += p; u < acc }).unwrap_or(3);
            counts[i] += 1;
        }
        let p = empirical_distribution(&counts).unwrap();
        let dev = p.probs().iter().zip(q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(dev <= 0.01, "max deviation {dev}");
    }

    fn random_dist() -> impl Strategy<Value = ProbVector> {
        prop::collection::vec(0.0f64..1.0, 1..12).prop_filter_map("all zero", |w| {
            let s: f64 = w.iter().sum();
            (s > 1e-6).then(|| ProbVector::new(w.iter().map(|x| x / s).collect()).ok()).flatten()
        })
    }

    proptest! {
        #[test]
        fn shannon_bounds(p in random_dist()) {
            let h = shannon_entropy(&p);
            prop_assert!(h >= 0.0);
            prop_assert!(h <= (p.len() as f64).ln() + 1e-12);
        }

        #[test]
        fn renyi_half_dominates_shannon(p in random_dist()) {
            prop_assert!(renyi_entropy(&p, 0.5).unwrap() >= shannon_entropy(&p) - 1e-12);
        }

        #[test]
        fn entropies_are_permutation_invariant(p in random_dist(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            let mut v = p.probs().to_vec();
            v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let q = ProbVector::new(v).unwrap();
            prop_assert!(close(shannon_entropy(&p), shannon_entropy(&q), 1e-12));
            prop_assert!(close(renyi_entropy(&p, 0.5).unwrap(), renyi_entropy(&q, 0.5).unwrap(), 1e-12));
        }

        #[test]
        fn distance_is_a_metric(a in prop::collection::vec(0.0f64..3.0, 1..8), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mk = |vals: Vec<f64>| -> EntropyTable {
                vals.into_iter().enumerate().map(|(i, v)| (StateKey(i as u128), v)).collect()
            };
            let b: Vec<f64> = a.iter().map(|_| rng.gen_range(0.0..3.0)).collect();
            let c: Vec<f64> = a.iter().map(|_| rng.gen_range(0.0..3.0)).collect();
            let (ta, tb, tc) = (mk(a.clone()), mk(b), mk(c));
            let ab = entropy_table_distance(&ta, &tb).unwrap();
            let ba = entropy_table_distance(&tb, &ta).unwrap();
            let bc = entropy_table_distance(&tb, &tc).unwrap();
            let ac = entropy_table_distance(&ta, &tc).unwrap();
            prop_assert!(ab >= 0.0);
            prop_assert!(close(ab, ba, 1e-12));
            prop_assert!(ac <= ab + bc + 1e-12);
            prop_assert_eq!(entropy_table_distance(&ta, &ta).unwrap(), 0.0);
            prop_assert_eq!(ab == 0.0, ta == tb);
        }
    }

    #[test]
    fn uniform_renyi_is_log_n() {
        for n in 1..=64 {
            for order in [0.25, 0.5, 2.0] {
                let h = renyi_entropy(&ProbVector::uniform(n), order).unwrap();
                assert!(close(h, (n as f64).ln(), 1e-12), "n={n} order={order}: {h}");
            }
        }
    }
}
