use rfa_core::agents::{
    train_q_agent_with, Greedy, Policy, QTable, RewardSpec, TrainConfig, UniformRandom, VictimBehavior,
};
use rfa_core::entropy::ActionCountTable;
use rfa_core::eval::{evaluate_swap_in, summarize, EvalConfig};
use rfa_core::game::Player;
use rfa_core::io::{self, CurvePoint, KeyValues};
use rfa_core::seed;

use crate::args::{RewardKind, TrainArgs};
use crate::context::{require_input, usage, CliResult, Ctx, Manifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Victim,
    Attacker,
}

pub fn parse_behavior(s: &str) -> CliResult<VictimBehavior> {
    VictimBehavior::parse(s).map_or_else(
        || usage(format!("unknown behavior `{s}` (greedy, softmax, epsilon-greedy:<e>)")),
        Ok,
    )
}

fn reward_spec<'a>(
    kind: RewardKind,
    a: &TrainArgs,
    victim: Option<&'a QTable>,
    counts: Option<&'a ActionCountTable>,
) -> RewardSpec<'a> {
    match kind {
        RewardKind::Game => RewardSpec::GameReward,
        RewardKind::AntagonisticValue => RewardSpec::AntagonisticValue { victim, site: a.site.into() },
        RewardKind::MoveMax => RewardSpec::MoveMaximizer,
        RewardKind::VictimEntropy => RewardSpec::VictimEntropy { victim, order: a.order, site: a.site.into() },
        RewardKind::EmpiricalVictimEntropy => RewardSpec::EmpiricalVictimEntropy {
            counts,
            order: a.order,
            unobserved_penalty: a.penalty,
            site: a.site.into(),
        },
        RewardKind::Random => RewardSpec::RandomReward { seed: seed::stream_seed(a.common.seed, "random-reward", 0) },
    }
}

pub fn run(a: &TrainArgs, role: Role, config: &KeyValues) -> CliResult {
    let ctx = Ctx::new(&a.common)?;
    let kind = match (a.reward, role) {
        (Some(k), _) => k,
        (None, Role::Victim) => RewardKind::Game,
        (None, Role::Attacker) => return usage("train-attacker needs --reward"),
    };
    let seat: Player = a.seat.map_or(
        match role {
            Role::Victim => Player::P1,
            Role::Attacker => Player::P2,
        },
        Player::from,
    );
    let behavior = parse_behavior(&a.victim_behavior)?;

    let victim = match &a.victim_table {
        Some(p) => {
            require_input(p, "victim table")?;
            Some(io::read_qtable(p, ctx.game.config())?)
        }
        None => None,
    };
    let counts = match &a.counts {
        Some(p) => {
            require_input(p, "count table")?;
            Some(io::read_counts(p, ctx.game.config())?)
        }
        None => None,
    };
    let reward = reward_spec(kind, a, victim.as_ref(), counts.as_ref());
    reward.validate()?;

    let mut cfg = TrainConfig::new(a.episodes, a.gamma.unwrap_or(reward.default_gamma()), ctx.seed);
    cfg.learning_rate = a.lr;
    cfg.epsilon_start = a.epsilon_start;
    cfg.epsilon_end = a.epsilon_end;
    cfg.seat = seat;
    cfg.opening_moves = a.opening_moves;
    cfg.validate()?;

    let opponent: Box<dyn Policy + '_> = match &victim {
        Some(q) => behavior.policy(q),
        None => Box::new(UniformRandom),
    };

    let mut curve = Vec::new();
    let mut rng = seed::stream(ctx.seed, "train", 0);
    let q = train_q_agent_with(&ctx.game, opponent.as_ref(), &reward, &cfg, &mut rng, a.eval_every, |episode, q| {
        let mut ecfg = EvalConfig::new(a.eval_games as usize, seed::stream_seed(ctx.seed, "curve", episode));
        ecfg.opening_moves = a.eval_opening;
        ecfg.victim_seat = seat.other();
        let report = evaluate_swap_in(&ctx.game, opponent.as_ref(), &Greedy(q), &ecfg, ctx.exec)?;
        let s = summarize(&report.matches(), seat)?;
        curve.push(CurvePoint { episode, attacker_win_rate: s.attacker_win_rate, mean_moves: s.mean_moves });
        Ok(())
    })?;

    let mut manifest = Manifest::new(&a.out, "");
    let table = manifest.path("qtable.txt");
    io::write_qtable(&table, ctx.game.config(), &q)?;
    manifest.output("qtable", table.clone());
    if a.eval_every > 0 {
        let path = manifest.path("curve.csv");
        io::write_text(&path, &io::render_curve(&ctx.digest, &curve))?;
        manifest.output("curve", path);
    }
    manifest.extra.set("reward", reward.name());
    let m = manifest.write(&ctx, config)?;
    println!("wrote {} ({} states, {} entries)", table.display(), q.states(), q.entries());
    if let Some(last) = curve.last() {
        println!(
            "episode {}: win rate {:.3}, mean moves {:.2}",
            last.episode, last.attacker_win_rate, last.mean_moves
        );
    }
    println!("manifest {}", m.display());
    Ok(())
}
