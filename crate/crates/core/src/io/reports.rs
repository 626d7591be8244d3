use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{body, format_err, header, parse_field, parse_key, read_text, write_text};
use crate::error::{Error, Result};
use crate::eval::{MatchRecord, MetricsSummary, SwapInRecord, TheoremCheck};
use crate::game::Player;

const MATCH_COLUMNS: &str = "game_id,seed,swap_ply,winner,moves";
const THEOREM_COLUMNS: &str = "seat,state_key,n,log_value,pass";
const CURVE_COLUMNS: &str = "episode,attacker_win_rate,mean_moves";
const SUMMARY_COLUMNS: &str = "label,games,attacker_win_rate,victim_win_rate,draw_rate,mean_moves,std_moves";

fn csv_body<'a>(
    path: &Path,
    text: &'a str,
    kind: &str,
    digest: &str,
    columns: &str,
) -> Result<impl Iterator<Item = (usize, Vec<&'a str>)>> {
    let mut lines = body(path, text, kind, digest)?;
    match lines.next() {
        Some((_, l)) if l == columns => {}
        Some((n, _)) => return Err(format_err(path, n, format!("expected columns `{columns}`"))),
        None => return Err(format_err(path, 2, "missing column header")),
    }
    Ok(lines.map(|(n, l)| (n, l.split(',').collect())))
}

fn check_width(path: &Path, n: usize, fields: &[&str], columns: &str) -> Result<()> {
    let want = columns.split(',').count();
    if fields.len() != want {
        return Err(format_err(path, n, format!("expected {want} fields, found {}", fields.len())));
    }
    Ok(())
}

fn winner_name(w: Option<Player>) -> &'static str {
    w.map_or("draw", Player::name)
}

fn parse_winner(path: &Path, n: usize, s: &str) -> Result<Option<Player>> {
    match s {
        "draw" => Ok(None),
        _ => Player::parse(s)
            .map(Some)
            .ok_or_else(|| format_err(path, n, format!("bad winner `{s}`"))),
    }
}

/// One row per swap-in game.
pub fn render_matches(digest: &str, records: &[SwapInRecord]) -> String {
    let mut s = header("matches", digest);
    s.push_str(MATCH_COLUMNS);
    s.push('\n');
    for r in records {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.game_id,
            r.seed,
            r.record.swap_ply,
            winner_name(r.record.winner),
            r.record.moves
        );
    }
    s
}

pub fn parse_matches(path: &Path, text: &str, digest: &str) -> Result<Vec<SwapInRecord>> {
    let mut out = Vec::new();
    for (n, f) in csv_body(path, text, "matches", digest, MATCH_COLUMNS)? {
        check_width(path, n, &f, MATCH_COLUMNS)?;
        out.push(SwapInRecord {
            game_id: parse_field(path, n, Some(f[0]), "game_id")?,
            seed: parse_field(path, n, Some(f[1]), "seed")?,
            record: MatchRecord {
                swap_ply: parse_field(path, n, Some(f[2]), "swap_ply")?,
                winner: parse_winner(path, n, f[3])?,
                moves: parse_field(path, n, Some(f[4]), "moves")?,
            },
        });
    }
    Ok(out)
}

/// One row per checked state; `n` is the number of plies to the win.
pub fn render_theorem(digest: &str, checks: &[TheoremCheck]) -> String {
    let mut s = header("theorem", digest);
    s.push_str(THEOREM_COLUMNS);
    s.push('\n');
    for c in checks {
        let _ = writeln!(
            s,
            "{},{},{},{:?},{}",
            c.seat.name(),
            c.key,
            c.steps,
            c.log_value,
            c.pass as u8
        );
    }
    s
}

/// A row of a theorem file, without the fields that are not written.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremRow {
    pub seat: Player,
    pub key: crate::game::StateKey,
    pub steps: u32,
    pub log_value: f64,
    pub pass: bool,
}

pub fn parse_theorem(path: &Path, text: &str, digest: &str) -> Result<Vec<TheoremRow>> {
    let mut out = Vec::new();
    for (n, f) in csv_body(path, text, "theorem", digest, THEOREM_COLUMNS)? {
        check_width(path, n, &f, THEOREM_COLUMNS)?;
        out.push(TheoremRow {
            seat: Player::parse(f[0]).ok_or_else(|| format_err(path, n, "bad seat"))?,
            key: parse_key(path, n, Some(f[1]))?,
            steps: parse_field(path, n, Some(f[2]), "n")?,
            log_value: parse_field(path, n, Some(f[3]), "log_value")?,
            pass: match f[4] {
                "1" => true,
                "0" => false,
                _ => return Err(format_err(path, n, "bad pass flag")),
            },
        });
    }
    Ok(out)
}

/// Progress of a learner measured at a checkpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub episode: u64,
    pub attacker_win_rate: f64,
    pub mean_moves: f64,
}

pub fn render_curve(digest: &str, points: &[CurvePoint]) -> String {
    let mut s = header("curve", digest);
    s.push_str(CURVE_COLUMNS);
    s.push('\n');
    for p in points {
        let _ = writeln!(s, "{},{:?},{:?}", p.episode, p.attacker_win_rate, p.mean_moves);
    }
    s
}

pub fn parse_curve(path: &Path, text: &str, digest: &str) -> Result<Vec<CurvePoint>> {
    let mut out = Vec::new();
    for (n, f) in csv_body(path, text, "curve", digest, CURVE_COLUMNS)? {
        check_width(path, n, &f, CURVE_COLUMNS)?;
        out.push(CurvePoint {
            episode: parse_field(path, n, Some(f[0]), "episode")?,
            attacker_win_rate: parse_field(path, n, Some(f[1]), "attacker_win_rate")?,
            mean_moves: parse_field(path, n, Some(f[2]), "mean_moves")?,
        });
    }
    Ok(out)
}

/// Labelled summaries, one row each.
pub fn render_summaries(digest: &str, rows: &[(String, MetricsSummary)]) -> String {
    let mut s = header("summary", digest);
    s.push_str(SUMMARY_COLUMNS);
    s.push('\n');
    for (label, m) in rows {
        let _ = writeln!(
            s,
            "{label},{},{:?},{:?},{:?},{:?},{:?}",
            m.games, m.attacker_win_rate, m.victim_win_rate, m.draw_rate, m.mean_moves, m.std_moves
        );
    }
    s
}

/// Ordered `key=value` settings, written one per line after the header.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeyValues(pub BTreeMap<String, String>);

impl KeyValues {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.insert(key.to_string(), value.to_string());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn render(&self, kind: &str, digest: &str) -> String {
        let mut s = header(kind, digest);
        for (k, v) in &self.0 {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    pub fn parse(path: &Path, text: &str, kind: &str, digest: &str) -> Result<Self> {
        let mut out = Self::new();
        for (n, line) in body(path, text, kind, digest)? {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format_err(path, n, "expected key=value"))?;
            out.set(k, v);
        }
        Ok(out)
    }
}

/// Parses a free-form `key=value` file with `#` comments and no header.
pub fn parse_settings(path: &Path, text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format_err(path, i + 1, "expected key=value"))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn read_settings(path: impl AsRef<Path>) -> Result<Vec<(String, String)>> {
    let path = path.as_ref();
    parse_settings(path, &read_text(path)?)
}

pub fn write_matches(path: impl AsRef<Path>, digest: &str, records: &[SwapInRecord]) -> Result<()> {
    write_text(path, &render_matches(digest, records))
}

pub fn read_matches(path: impl AsRef<Path>, digest: &str) -> Result<Vec<SwapInRecord>> {
    let path = path.as_ref();
    parse_matches(path, &read_text(path)?, digest)
}

/// The kind named in a file's header line, without checking anything else.
pub fn peek_kind(path: &Path, text: &str) -> Result<String> {
    let first = text.lines().next().unwrap_or("");
    let first = first.strip_prefix("<!-- ").unwrap_or(first);
    first
        .strip_prefix("# rfa ")
        .and_then(|rest| rest.split(' ').next())
        .map(str::to_string)
        .ok_or_else(|| format_err(path, 1, "not an rfa file"))
}

/// The game digest named in a file's header line.
pub fn peek_digest(path: &Path, text: &str) -> Result<String> {
    let first = text.lines().next().unwrap_or("");
    first
        .split(' ')
        .find_map(|f| f.strip_prefix("game="))
        .map(str::to_string)
        .ok_or_else(|| Error::Format {
            path: path.to_path_buf(),
            line: 1,
            msg: "missing game digest".into(),
        })
}
