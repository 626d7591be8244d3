use crate::error::{Error, Result};
use crate::game::{ActionId, StateKey};

/// One attacker decision. Rewards are not stored; planning recomputes them
/// from the victim count table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transition {
    pub s: StateKey,
    pub a: ActionId,
    pub s_next: StateKey,
    pub terminal: bool,
    /// State the victim faced after `a`, `None` when `a` ended the game.
    pub faced: Option<StateKey>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrajectoryDataset {
    transitions: Vec<Transition>,
    /// End index (exclusive) of each trajectory, strictly increasing, the
    /// last one equal to `transitions.len()`.
    boundaries: Vec<usize>,
}

impl TrajectoryDataset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(transitions: Vec<Transition>, boundaries: Vec<usize>) -> Result<Self> {
        let ok = boundaries.windows(2).all(|w| w[0] < w[1])
            && boundaries.first().is_none_or(|&b| b > 0)
            && boundaries.last().copied().unwrap_or(0) == transitions.len();
        if !ok {
            return Err(Error::InvalidParameter("trajectory boundaries do not partition the dataset".into()));
        }
        Ok(TrajectoryDataset { transitions, boundaries })
    }

    /// Splits after every terminal transition; a trailing open segment
    /// becomes its own trajectory.
    pub fn from_transitions(transitions: Vec<Transition>) -> Self {
        let mut boundaries: Vec<usize> = transitions
            .iter()
            .enumerate()
            .filter(|(_, t)| t.terminal)
            .map(|(i, _)| i + 1)
            .collect();
        if boundaries.last().copied().unwrap_or(0) != transitions.len() {
            boundaries.push(transitions.len());
        }
        TrajectoryDataset { transitions, boundaries }
    }

    pub fn push_trajectory(&mut self, trajectory: &[Transition]) {
        if trajectory.is_empty() {
            return;
        }
        self.transitions.extend_from_slice(trajectory);
        self.boundaries.push(self.transitions.len());
    }

    pub fn append(&mut self, other: &TrajectoryDataset) {
        for t in other.trajectories() {
            self.push_trajectory(t);
        }
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn trajectories(&self) -> impl Iterator<Item = &[Transition]> {
        let starts = std::iter::once(0).chain(self.boundaries.iter().copied());
        starts
            .zip(self.boundaries.iter().copied())
            .map(|(a, b)| &self.transitions[a..b])
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: u128, terminal: bool) -> Transition {
        Transition {
            s: StateKey(i),
            a: ActionId(0),
            s_next: StateKey(i + 1),
            terminal,
            faced: None,
        }
    }

    #[test]
    fn boundaries_partition() {
        let d = TrajectoryDataset::from_transitions(vec![t(0, false), t(1, true), t(2, true), t(3, false)]);
        assert_eq!(d.boundaries(), &[2, 3, 4]);
        let lens: Vec<_> = d.trajectories().map(<[_]>::len).collect();
        assert_eq!(lens, vec![2, 1, 1]);
        assert!(TrajectoryDataset::from_parts(vec![t(0, true)], vec![]).is_err());
        assert!(TrajectoryDataset::from_parts(vec![t(0, true)], vec![0, 1]).is_err());
        assert!(TrajectoryDataset::from_parts(vec![], vec![]).is_ok());

        let mut a = TrajectoryDataset::new();
        a.push_trajectory(&[t(0, true)]);
        a.append(&d);
        assert_eq!(a.boundaries(), &[1, 3, 4, 5]);
    }
}
