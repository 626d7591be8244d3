use std::fmt::Write as _;
use std::path::Path;

use super::{body, format_err, game_digest, header, parse_field, parse_key, read_text, write_text};
use crate::agents::QTable;
use crate::entropy::{ActionCountTable, EntropyTable};
use crate::error::Result;
use crate::game::{ActionId, GameConfig};
use crate::pipeline::{Transition, TrajectoryDataset};

// Values are written with `{:?}`, the shortest text that parses back to the
// same f64.

/// `<key> <action> <value>` per line, ordered by key then action.
pub fn render_qtable(cfg: &GameConfig, q: &QTable) -> String {
    let mut s = header("qtable", &game_digest(cfg));
    for (k, a, v) in q.sorted_entries() {
        let _ = writeln!(s, "{k} {} {v:?}", a.0);
    }
    s
}

pub fn parse_qtable(path: &Path, text: &str, cfg: &GameConfig) -> Result<QTable> {
    let mut q = QTable::new();
    for (n, line) in body(path, text, "qtable", &game_digest(cfg))? {
        let mut f = line.split(' ');
        let key = parse_key(path, n, f.next())?;
        let a: u32 = parse_field(path, n, f.next(), "action")?;
        let v: f64 = parse_field(path, n, f.next(), "value")?;
        q.set(key, ActionId(a), v).map_err(|e| format_err(path, n, e.to_string()))?;
    }
    Ok(q)
}

/// `<key> <count> <count> ...` per line, one count per legal action.
pub fn render_counts(cfg: &GameConfig, counts: &ActionCountTable) -> String {
    let mut s = header("counts", &game_digest(cfg));
    for (k, c) in counts.sorted() {
        let _ = write!(s, "{k}");
        for x in c {
            let _ = write!(s, " {x}");
        }
        s.push('\n');
    }
    s
}

pub fn parse_counts(path: &Path, text: &str, cfg: &GameConfig) -> Result<ActionCountTable> {
    let mut t = ActionCountTable::new();
    for (n, line) in body(path, text, "counts", &game_digest(cfg))? {
        let mut f = line.split(' ');
        let key = parse_key(path, n, f.next())?;
        let c = f
            .map(|x| x.parse::<u64>().map_err(|_| format_err(path, n, "bad count")))
            .collect::<Result<Vec<_>>>()?;
        t.insert_counts(key, c).map_err(|e| format_err(path, n, e.to_string()))?;
    }
    Ok(t)
}

/// `<key> <entropy>` per line.
pub fn render_entropy(cfg: &GameConfig, h: &EntropyTable) -> String {
    let mut s = header("entropy", &game_digest(cfg));
    for (k, v) in h.sorted() {
        let _ = writeln!(s, "{k} {v:?}");
    }
    s
}

pub fn parse_entropy(path: &Path, text: &str, cfg: &GameConfig) -> Result<EntropyTable> {
    let mut h = EntropyTable::new();
    for (n, line) in body(path, text, "entropy", &game_digest(cfg))? {
        let mut f = line.split(' ');
        let key = parse_key(path, n, f.next())?;
        h.insert(key, parse_field(path, n, f.next(), "entropy")?);
    }
    Ok(h)
}

/// `<s> <action> <s_next> <terminal 0|1> <faced key or ->` per line, in
/// dataset order. A trajectory ends at each terminal record.
pub fn render_dataset(cfg: &GameConfig, d: &TrajectoryDataset) -> String {
    let mut s = header("dataset", &game_digest(cfg));
    for t in d.transitions() {
        let faced = t.faced.map_or_else(|| "-".to_string(), |k| k.to_string());
        let _ = writeln!(s, "{} {} {} {} {faced}", t.s, t.a.0, t.s_next, t.terminal as u8);
    }
    s
}

pub fn parse_dataset(path: &Path, text: &str, cfg: &GameConfig) -> Result<TrajectoryDataset> {
    let mut out = Vec::new();
    for (n, line) in body(path, text, "dataset", &game_digest(cfg))? {
        let mut f = line.split(' ');
        let s = parse_key(path, n, f.next())?;
        let a: u32 = parse_field(path, n, f.next(), "action")?;
        let s_next = parse_key(path, n, f.next())?;
        let terminal = match f.next() {
            Some("0") => false,
            Some("1") => true,
            _ => return Err(format_err(path, n, "bad terminal flag")),
        };
        let faced = match f.next() {
            Some("-") => None,
            other => Some(parse_key(path, n, other)?),
        };
        out.push(Transition { s, a: ActionId(a), s_next, terminal, faced });
    }
    Ok(TrajectoryDataset::from_transitions(out))
}

macro_rules! file_io {
    ($write:ident, $read:ident, $render:ident, $parse:ident, $ty:ty) => {
        pub fn $write(path: impl AsRef<Path>, cfg: &GameConfig, value: &$ty) -> Result<()> {
            write_text(path, &$render(cfg, value))
        }

        pub fn $read(path: impl AsRef<Path>, cfg: &GameConfig) -> Result<$ty> {
            let path = path.as_ref();
            $parse(path, &read_text(path)?, cfg)
        }
    };
}

file_io!(write_qtable, read_qtable, render_qtable, parse_qtable, QTable);
file_io!(write_counts, read_counts, render_counts, parse_counts, ActionCountTable);
file_io!(write_entropy, read_entropy, render_entropy, parse_entropy, EntropyTable);
file_io!(write_dataset, read_dataset, render_dataset, parse_dataset, TrajectoryDataset);
