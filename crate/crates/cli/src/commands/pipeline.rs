use std::path::PathBuf;

use rfa_core::agents::QTable;
use rfa_core::game::Game;
use rfa_core::io::{self, KeyValues};
use rfa_core::pipeline::{explore_phase, plan_phase, rollout_phase, PipelineConfig};
use rfa_core::{seed, Error};

use super::train::parse_behavior;
use crate::args::{Phase, PipelineArgs};
use crate::context::{require_input, CliResult, Ctx, Manifest};

fn pipeline_config(a: &PipelineArgs) -> CliResult<PipelineConfig> {
    let cfg = PipelineConfig {
        explore_episodes: a.explore_episodes,
        explore_lr: a.explore_lr,
        explore_gamma: a.explore_gamma,
        rollout_transitions: a.transitions,
        victim_action_target: a.victim_actions,
        rollout_epsilon: a.rollout_epsilon,
        rollout_shards: a.shards,
        renyi_order: a.order,
        unobserved_penalty: a.penalty,
        plan_epochs: a.plan_epochs,
        plan_lr: a.plan_lr,
        plan_gamma: a.plan_gamma,
        seed: a.common.seed,
        victim_behavior: parse_behavior(&a.victim_behavior)?,
        victim_seat: a.victim_seat.into(),
        opening_moves: a.opening_moves,
        ..PipelineConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn load_victim(a: &PipelineArgs, game: &Game) -> CliResult<QTable> {
    let path = a
        .victim_table
        .as_ref()
        .ok_or(Error::MissingVictimTable("explore and rollout phases"))?;
    require_input(path, "victim table")?;
    Ok(io::read_qtable(path, game.config())?)
}

/// Phases seed from their own streams, so running them one at a time gives
/// the same files as `--phase all`.
pub fn run(a: &PipelineArgs, config: &KeyValues) -> CliResult {
    let ctx = Ctx::new(&a.common)?;
    let cfg = pipeline_config(a)?;
    let (game, probe) = ctx.game.instrumented();
    let gc = game.config().clone();
    let suffix = match a.phase {
        Phase::All => String::new(),
        p => format!("-{}", p.name()),
    };
    let mut manifest = Manifest::new(&a.out, &suffix);
    let out = |f: &str| -> PathBuf { a.out.join(f) };
    let runs = |p: Phase| a.phase == p || a.phase == Phase::All;

    let mut explorer = None;
    if runs(Phase::Explore) {
        let victim = load_victim(a, &game)?;
        let q = explore_phase(&game, &victim, &cfg, &mut seed::stream(ctx.seed, "explore", 0))?;
        let path = out("explorer.txt");
        io::write_qtable(&path, &gc, &q)?;
        println!("explore: {} states -> {}", q.states(), path.display());
        manifest.output("explorer", path);
        explorer = Some(q);
    }

    let mut rollout = None;
    if runs(Phase::Rollout) {
        let victim = load_victim(a, &game)?;
        let explorer = match explorer {
            Some(q) => q,
            None => {
                let path = a.explorer.clone().unwrap_or_else(|| out("explorer.txt"));
                require_input(&path, "explorer table")?;
                io::read_qtable(&path, &gc)?
            }
        };
        let r = rollout_phase(&game, &explorer, &victim, &cfg, &mut seed::stream(ctx.seed, "rollout", 0), ctx.exec)?;
        let (dp, cp) = (out("dataset.txt"), out("counts.txt"));
        io::write_dataset(&dp, &gc, &r.dataset)?;
        io::write_counts(&cp, &gc, &r.counts)?;
        println!(
            "rollout: {} transitions, {} victim actions over {} states -> {}",
            r.dataset.len(),
            r.counts.total_observations(),
            r.counts.len(),
            dp.display()
        );
        manifest.output("dataset", dp);
        manifest.output("counts", cp);
        rollout = Some(r);
    }

    if runs(Phase::Plan) {
        let (dataset, counts) = match rollout {
            Some(r) => (r.dataset, r.counts),
            None => {
                let dp = a.dataset.clone().unwrap_or_else(|| out("dataset.txt"));
                let cp = a.counts.clone().unwrap_or_else(|| out("counts.txt"));
                require_input(&dp, "dataset")?;
                require_input(&cp, "count table")?;
                (io::read_dataset(&dp, &gc)?, io::read_counts(&cp, &gc)?)
            }
        };
        let q = plan_phase(&dataset, &counts, &cfg, &mut seed::stream(ctx.seed, "plan", 0))?;
        let path = out("attacker.txt");
        io::write_qtable(&path, &gc, &q)?;
        println!("plan: {} states -> {}", q.states(), path.display());
        manifest.output("attacker", path);
    }

    manifest.extra.set("phase", a.phase.name()).set("reward_reads", probe.reads());
    let m = manifest.write(&ctx, config)?;
    println!("reward reads: {}", probe.reads());
    println!("manifest {}", m.display());
    Ok(())
}
