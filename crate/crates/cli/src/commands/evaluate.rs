use rfa_core::agents::{Greedy, Policy, UniformRandom};
use rfa_core::eval::{evaluate_swap_in, summarize, EvalConfig};
use rfa_core::{io, Error};

use crate::args::EvaluateArgs;
use crate::context::{require_input, CliError, CliResult, Ctx};

pub fn run(a: &EvaluateArgs) -> CliResult {
    let ctx = Ctx::new(&a.common)?;
    let gc = ctx.game.config();
    require_input(&a.victim, "victim table")?;
    let victim = io::read_qtable(&a.victim, gc)?;
    let table = match a.attacker.as_str() {
        "uniform" => None,
        p => {
            require_input(p.as_ref(), "attacker table")?;
            Some(io::read_qtable(p, gc)?)
        }
    };
    let attacker: Box<dyn Policy + '_> = match &table {
        Some(q) => Box::new(Greedy(q)),
        None => Box::new(UniformRandom),
    };

    let mut cfg = EvalConfig::new(a.games as usize, ctx.seed);
    cfg.opening_moves = a.opening_moves;
    cfg.victim_seat = a.victim_seat.into();
    cfg.max_attempts = a.max_attempts;
    let report = evaluate_swap_in(&ctx.game, &Greedy(&victim), attacker.as_ref(), &cfg, ctx.exec).map_err(|e| match e {
        Error::OpeningTooLong(_) => CliError::Runtime(format!("{e}; try a smaller --opening-moves")),
        e => e.into(),
    })?;
    io::write_matches(&a.out, &ctx.digest, &report.records)?;
    let s = summarize(&report.matches(), cfg.attacker_seat())?;
    println!(
        "games {} attacker win rate {:.3} victim win rate {:.3} draw rate {:.3} moves {:.2} ± {:.2} (retries {})",
        s.games, s.attacker_win_rate, s.victim_win_rate, s.draw_rate, s.mean_moves, s.std_moves, report.retries
    );

    let label = a.label.clone().unwrap_or_else(|| a.attacker.clone());
    if let Some(path) = &a.summary {
        io::write_text(path, &io::render_summaries(&ctx.digest, &[(label.clone(), s.clone())]))?;
    }
    if let Some(path) = &a.svg {
        let title = format!("{label}: mean moves {:.2} ± {:.2}", s.mean_moves, s.std_moves);
        let bars = [
            ("attacker win".to_string(), s.attacker_win_rate),
            ("victim win".to_string(), s.victim_win_rate),
            ("draw".to_string(), s.draw_rate),
        ];
        io::write_text(path, &io::bar_chart(&ctx.digest, &title, "rate", &bars))?;
    }
    Ok(())
}
