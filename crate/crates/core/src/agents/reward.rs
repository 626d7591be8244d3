//! Per-step rewards for attackers trained against a frozen victim.

use rand::Rng;

use super::policy::{softmax_policy, state_value};
use super::qtable::QTable;
use crate::entropy::{table_entropy, ActionCountTable, EntropyKind};
use crate::error::{Error, Result};
use crate::game::{Game, GameState};
use crate::seed::SimRng;

/// Which state a victim-derived reward is read at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntropySite {
    /// The state the victim faces right after the attacker's move.
    #[default]
    Faced,
    /// The attacker's next decision state, after the victim's reply.
    Next,
}

pub const DEFAULT_UNOBSERVED_PENALTY: f64 = -1.0;

#[derive(Debug, Clone, Copy)]
pub enum RewardSpec<'a> {
    /// The environment's terminal reward for the learner's seat.
    GameReward,
    /// Negated victim state value.
    AntagonisticValue {
        victim: Option<&'a QTable>,
        site: EntropySite,
    },
    /// Number of plies played so far.
    MoveMaximizer,
    /// Entropy of the softmax of the victim's values.
    VictimEntropy {
        victim: Option<&'a QTable>,
        order: f64,
        site: EntropySite,
    },
    /// Entropy of the victim's observed action frequencies.
    EmpiricalVictimEntropy {
        counts: Option<&'a ActionCountTable>,
        order: f64,
        unobserved_penalty: f64,
        site: EntropySite,
    },
    /// Uniform draw from {-1, 0, 1} on every step, from a stream of its own.
    RandomReward { seed: u64 },
    /// Always 0.
    Zero,
}

impl RewardSpec<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            RewardSpec::GameReward => "game",
            RewardSpec::AntagonisticValue { .. } => "antagonistic-value",
            RewardSpec::MoveMaximizer => "move-max",
            RewardSpec::VictimEntropy { .. } => "victim-entropy",
            RewardSpec::EmpiricalVictimEntropy { .. } => "empirical-victim-entropy",
            RewardSpec::RandomReward { .. } => "random",
            RewardSpec::Zero => "zero",
        }
    }

    /// Whether the adapter looks at the environment's reward at all.
    pub fn reads_game_reward(&self) -> bool {
        matches!(self, RewardSpec::GameReward)
    }

    pub fn is_entropy(&self) -> bool {
        matches!(
            self,
            RewardSpec::VictimEntropy { .. } | RewardSpec::EmpiricalVictimEntropy { .. }
        )
    }

    /// Discount used when none is given: 0.5 for entropy rewards, 0.9 otherwise.
    pub fn default_gamma(&self) -> f64 {
        if self.is_entropy() {
            0.5
        } else {
            0.9
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            RewardSpec::AntagonisticValue { victim: None, .. } => {
                Err(Error::MissingVictimTable("antagonistic-value"))
            }
            RewardSpec::VictimEntropy { victim: None, .. } => {
                Err(Error::MissingVictimTable("victim-entropy"))
            }
            RewardSpec::EmpiricalVictimEntropy { counts: None, .. } => {
                Err(Error::MissingVictimTable("empirical-victim-entropy"))
            }
            RewardSpec::VictimEntropy { order, .. }
            | RewardSpec::EmpiricalVictimEntropy { order, .. } => {
                EntropyKind::from_order(order).map(|_| ())
            }
            _ => Ok(()),
        }
    }
}

/// One attacker step: the attacker moved at `s_t`, the victim then faced
/// `faced` and the attacker next acts at `s_next` (or the game ended).
#[derive(Debug, Clone, Copy)]
pub struct AttackerStep<'s> {
    pub s_t: &'s GameState,
    pub faced: &'s GameState,
    pub s_next: &'s GameState,
    pub terminal: bool,
    /// The learner's terminal reward; only filled in for `GameReward`.
    pub game_reward: i8,
    /// Plies played before the attacker's move.
    pub move_count: u32,
}

impl AttackerStep<'_> {
    fn at(&self, site: EntropySite) -> &GameState {
        match site {
            EntropySite::Faced => self.faced,
            EntropySite::Next => self.s_next,
        }
    }
}

pub fn antagonist_reward(
    spec: &RewardSpec,
    game: &Game,
    step: &AttackerStep,
    rng: &mut SimRng,
) -> Result<f64> {
    spec.validate()?;
    Ok(match *spec {
        RewardSpec::GameReward => step.game_reward as f64,
        RewardSpec::AntagonisticValue { victim, site } => {
            -state_value(victim.expect("validated"), game, step.at(site))
        }
        RewardSpec::MoveMaximizer => step.move_count as f64,
        RewardSpec::VictimEntropy { victim, order, site } => {
            let s = step.at(site);
            if s.is_terminal() {
                0.0
            } else {
                let p = softmax_policy(victim.expect("validated"), game, s)?;
                EntropyKind::from_order(order)?.of(&p)?
            }
        }
        RewardSpec::EmpiricalVictimEntropy {
            counts,
            order,
            unobserved_penalty,
            site,
        } => {
            let s = step.at(site);
            if s.is_terminal() {
                0.0
            } else {
                let kind = EntropyKind::from_order(order)?;
                match table_entropy(counts.expect("validated"), game.canonical_key(s), kind) {
                    Ok(h) => h,
                    Err(Error::UnknownState) => unobserved_penalty,
                    Err(e) => return Err(e),
                }
            }
        }
        RewardSpec::RandomReward { .. } => rng.gen_range(-1i32..=1) as f64,
        RewardSpec::Zero => 0.0,
    })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;

    use super::*;
    use crate::game::{ActionId, GameConfig};

    struct Fixture {
        game: Game,
        s_t: GameState,
        faced: GameState,
        s_next: GameState,
    }

    fn fixture() -> Fixture {
        let game = Game::new(GameConfig::connect_k(2, 2, 2)).unwrap();
        let s_t = game.initial_state();
        let faced = game.apply_action(&s_t, ActionId(0)).unwrap().next;
        let s_next = game.apply_action(&faced, ActionId(1)).unwrap().next;
        Fixture {
            game,
            s_t,
            faced,
            s_next,
        }
    }

    fn step(f: &Fixture) -> AttackerStep<'_> {
        AttackerStep {
            s_t: &f.s_t,
            faced: &f.faced,
            s_next: &f.s_next,
            terminal: false,
            game_reward: 0,
            move_count: 0,
        }
    }

    #[test]
    fn victim_entropy_of_untrained_victim() {
        let f = fixture();
        let q = QTable::new();
        let spec = RewardSpec::VictimEntropy {
            victim: Some(&q),
            order: 0.5,
            site: EntropySite::Faced,
        };
        let mut rng = SimRng::seed_from_u64(0);
        let r = antagonist_reward(&spec, &f.game, &step(&f), &mut rng).unwrap();
        assert!((r - std::f64::consts::LN_2).abs() < 1e-6);
    }

    #[test]
    fn empirical_unobserved_gets_penalty() {
        let f = fixture();
        let counts = ActionCountTable::new();
        let spec = RewardSpec::EmpiricalVictimEntropy {
            counts: Some(&counts),
            order: 0.5,
            unobserved_penalty: DEFAULT_UNOBSERVED_PENALTY,
            site: EntropySite::Faced,
        };
        let mut rng = SimRng::seed_from_u64(0);
        assert_eq!(antagonist_reward(&spec, &f.game, &step(&f), &mut rng).unwrap(), -1.0);
        let mut counts = ActionCountTable::new();
        counts
            .insert_counts(f.game.canonical_key(&f.faced), vec![4, 4])
            .unwrap();
        let spec = RewardSpec::EmpiricalVictimEntropy {
            counts: Some(&counts),
            order: 0.5,
            unobserved_penalty: -1.0,
            site: EntropySite::Faced,
        };
        let r = antagonist_reward(&spec, &f.game, &step(&f), &mut rng).unwrap();
        assert!((r - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn antagonistic_value_negates_max() {
        let f = fixture();
        let mut q = QTable::new();
        let k = f.game.canonical_key(&f.faced);
        q.set(k, ActionId(0), 0.4).unwrap();
        q.set(k, ActionId(1), 0.7).unwrap();
        let spec = RewardSpec::AntagonisticValue {
            victim: Some(&q),
            site: EntropySite::Faced,
        };
        let mut rng = SimRng::seed_from_u64(0);
        assert_eq!(antagonist_reward(&spec, &f.game, &step(&f), &mut rng).unwrap(), -0.7);
    }

    #[test]
    fn missing_tables_are_reported() {
        let f = fixture();
        let mut rng = SimRng::seed_from_u64(0);
        for spec in [
            RewardSpec::AntagonisticValue { victim: None, site: EntropySite::Faced },
            RewardSpec::VictimEntropy { victim: None, order: 0.5, site: EntropySite::Faced },
        ] {
            assert!(matches!(
                antagonist_reward(&spec, &f.game, &step(&f), &mut rng),
                Err(Error::MissingVictimTable(_))
            ));
        }
    }

    #[test]
    fn simple_kinds() {
        let f = fixture();
        let mut rng = SimRng::seed_from_u64(3);
        let mut st = step(&f);
        st.move_count = 7;
        st.game_reward = -1;
        assert_eq!(antagonist_reward(&RewardSpec::MoveMaximizer, &f.game, &st, &mut rng).unwrap(), 7.0);
        assert_eq!(antagonist_reward(&RewardSpec::GameReward, &f.game, &st, &mut rng).unwrap(), -1.0);
        assert_eq!(antagonist_reward(&RewardSpec::Zero, &f.game, &st, &mut rng).unwrap(), 0.0);
        let mut seen = [false; 3];
        for _ in 0..100 {
            let r = antagonist_reward(&RewardSpec::RandomReward { seed: 1 }, &f.game, &st, &mut rng).unwrap();
            seen[(r + 1.0) as usize] = true;
        }
        assert_eq!(seen, [true; 3]);
    }

    #[test]
    fn terminal_faced_state_has_zero_entropy() {
        let game = Game::new(GameConfig::connect_k(2, 2, 2)).unwrap();
        let s0 = game.initial_state();
        let s1 = game.apply_action(&s0, ActionId(0)).unwrap().next;
        let s2 = game.apply_action(&s1, ActionId(1)).unwrap().next;
        let win = game.apply_action(&s2, ActionId(0)).unwrap();
        assert!(win.terminal);
        let q = QTable::new();
        let st = AttackerStep {
            s_t: &s2,
            faced: &win.next,
            s_next: &win.next,
            terminal: true,
            game_reward: 0,
            move_count: 2,
        };
        let spec = RewardSpec::VictimEntropy { victim: Some(&q), order: 0.5, site: EntropySite::Faced };
        let mut rng = SimRng::seed_from_u64(0);
        assert_eq!(antagonist_reward(&spec, &game, &st, &mut rng).unwrap(), 0.0);
    }
}
