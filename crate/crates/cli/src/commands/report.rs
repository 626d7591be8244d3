use std::path::Path;

use rfa_core::eval::summarize;
use rfa_core::io::{self, Series};

use crate::args::ReportArgs;
use crate::context::{usage, CliError, CliResult};

fn label(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

pub fn run(a: &ReportArgs) -> CliResult {
    let mut texts = Vec::new();
    for p in &a.inputs {
        texts.push(io::read_text(p)?);
    }
    let kind = io::peek_kind(&a.inputs[0], &texts[0])?;
    let digest = io::peek_digest(&a.inputs[0], &texts[0])?;
    for (p, t) in a.inputs.iter().zip(&texts) {
        if io::peek_kind(p, t)? != kind {
            return usage("inputs mix file kinds");
        }
    }
    match kind.as_str() {
        "matches" => {
            let mut rows = Vec::new();
            for (p, t) in a.inputs.iter().zip(&texts) {
                let records = io::parse_matches(p, t, &digest)?;
                let m: Vec<_> = records.iter().map(|r| r.record).collect();
                let s = summarize(&m, rfa_core::game::Player::from(a.victim_seat).other())?;
                println!(
                    "{}: games {} attacker win rate {:.3} moves {:.2} ± {:.2}",
                    label(p),
                    s.games,
                    s.attacker_win_rate,
                    s.mean_moves,
                    s.std_moves
                );
                rows.push((label(p), s));
            }
            io::write_text(&a.out, &io::render_summaries(&digest, &rows))?;
            if let Some(svg) = &a.svg {
                let bars: Vec<_> = rows.iter().map(|(l, s)| (l.clone(), s.mean_moves)).collect();
                let title = a.title.clone().unwrap_or_else(|| "mean game length".into());
                io::write_text(svg, &io::bar_chart(&digest, &title, "moves", &bars))?;
            }
        }
        "curve" => {
            let mut series = Vec::new();
            for (p, t) in a.inputs.iter().zip(&texts) {
                let points = io::parse_curve(p, t, &digest)?;
                series.push(Series {
                    name: label(p),
                    points: points.iter().map(|c| (c.episode as f64, c.mean_moves)).collect(),
                });
            }
            let svg = a.svg.as_ref().ok_or_else(|| CliError::Usage("curve inputs need --svg".into()))?;
            let title = a.title.clone().unwrap_or_else(|| "training curve".into());
            io::write_text(svg, &io::line_chart(&digest, &title, "episode", "mean moves", &series))?;
        }
        other => return usage(format!("cannot report on `{other}` files")),
    }
    Ok(())
}
