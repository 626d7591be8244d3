#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

pub fn rfa(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rfa"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn rfa")
}

/// Runs `rfa` and returns its stdout, or a message naming the exit status
/// and stderr.
pub fn rfa_ok(dir: &Path, args: &[&str]) -> Result<String, String> {
    let out = rfa(dir, args);
    if out.status.success() {
        Ok(String::from_utf8_lossy(&out.stdout).into_owned())
    } else {
        Err(format!(
            "`rfa {}` exited {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr).trim()
        ))
    }
}

/// Data rows of a CSV artifact: the header comment and column line are
/// skipped.
pub fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(2)
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

/// Mean game length and the share of games won by `seat`, read straight
/// from a match CSV.
pub fn match_stats(text: &str, seat: &str) -> (f64, f64) {
    let rows = csv_rows(text);
    let n = rows.len() as f64;
    let moves: f64 = rows.iter().map(|r| r[4].parse::<f64>().unwrap()).sum();
    let wins = rows.iter().filter(|r| r[3] == seat).count() as f64;
    (moves / n, wins / n)
}
