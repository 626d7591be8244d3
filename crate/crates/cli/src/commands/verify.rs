use rfa_core::eval::{verify_theorem_one, SolveOptions};
use rfa_core::game::Player;
use rfa_core::io;
use rfa_core::pipeline::{sample_bound, SampleBoundParams};

use crate::args::{BoundArgs, Seats, VerifyArgs};
use crate::context::{usage, CliError, CliResult, Ctx};

pub fn theorem(a: &VerifyArgs) -> CliResult {
    if !(a.gamma > 0.0 && a.gamma < 1.0) {
        return usage(format!("--gamma must lie strictly between 0 and 1, got {}", a.gamma));
    }
    let ctx = Ctx::new(&a.common)?;
    let seats: &[Player] = match a.seats {
        Seats::Both => &[Player::P1, Player::P2],
        Seats::P1 => &[Player::P1],
        Seats::P2 => &[Player::P2],
    };
    let mut opts = SolveOptions::new(a.gamma);
    opts.state_cap = a.state_cap;
    opts.exec = ctx.exec;
    let checks = verify_theorem_one(&ctx.game, seats, &opts)?;
    io::write_text(&a.out, &io::render_theorem(&ctx.digest, &checks))?;
    let failed: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
    println!(
        "checked {} winning states at gamma {}: {} failed -> {}",
        checks.len(),
        a.gamma,
        failed.len(),
        a.out.display()
    );
    if failed.is_empty() {
        return Ok(());
    }
    for c in &failed {
        eprintln!("  {} {} n={} log_gamma(V)={:?}", c.seat.name(), c.key, c.steps, c.log_value);
    }
    Err(CliError::Runtime(format!("{} states failed the check", failed.len())))
}

pub fn bound(a: &BoundArgs) -> CliResult {
    let p = SampleBoundParams {
        horizon: a.horizon,
        n_states: a.states,
        n_actions: a.actions,
        epsilon: a.eps,
        failure_prob: a.p,
        renyi_alpha: a.alpha,
        c: a.c,
    };
    let m = sample_bound(&p)?;
    println!("{m:.6e}");
    Ok(())
}
