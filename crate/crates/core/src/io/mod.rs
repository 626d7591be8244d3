//! Text formats for tables, datasets, reports and plots.
//!
//! Every file starts with one header line naming its kind, the format
//! version and the SHA-256 digest of the game configuration:
//!
//! ```text
//! # rfa qtable format=1 game=<64 hex digits>
//! ```
//!
//! SVG files carry the same header inside an XML comment. Loaders reject a
//! file whose game digest differs from the expected one.

mod reports;
mod svg;
mod tables;

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::game::{GameConfig, StateKey};

pub use reports::*;
pub use svg::{bar_chart, line_chart, Series};
pub use tables::*;

pub const FORMAT_VERSION: u32 = 1;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn game_digest(cfg: &GameConfig) -> String {
    sha256_hex(cfg.canonical_string().as_bytes())
}

pub fn header(kind: &str, digest: &str) -> String {
    format!("# rfa {kind} format={FORMAT_VERSION} game={digest}\n")
}

/// Checks a header line and returns the digest it names.
pub fn parse_header<'a>(path: &Path, line: &'a str, kind: &str) -> Result<&'a str> {
    let bad = |msg: String| Error::Format {
        path: path.to_path_buf(),
        line: 1,
        msg,
    };
    let line = line.trim_end();
    let line = line
        .strip_prefix("<!-- ")
        .and_then(|l| l.strip_suffix(" -->"))
        .unwrap_or(line);
    let fields: Vec<&str> = line.split(' ').collect();
    match fields.as_slice() {
        ["#", "rfa", k, version, game] if *k == kind => {
            let v = version
                .strip_prefix("format=")
                .ok_or_else(|| bad("missing format version".into()))?;
            if v != FORMAT_VERSION.to_string() {
                return Err(bad(format!("unsupported format version {v}")));
            }
            game.strip_prefix("game=").ok_or_else(|| bad("missing game digest".into()))
        }
        _ => Err(bad(format!("expected a `{kind}` header"))),
    }
}

fn check_digest(path: &Path, found: &str, expected: &str) -> Result<()> {
    if found != expected {
        return Err(Error::DigestMismatch {
            path: path.to_path_buf(),
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }
    Ok(())
}

/// Splits a file into its body lines after validating the header.
fn body<'a>(path: &Path, text: &'a str, kind: &str, expected: &str) -> Result<impl Iterator<Item = (usize, &'a str)>> {
    let mut lines = text.lines();
    let first = lines.next().ok_or_else(|| Error::Format {
        path: path.to_path_buf(),
        line: 1,
        msg: "empty file".into(),
    })?;
    check_digest(path, parse_header(path, first, kind)?, expected)?;
    Ok(lines
        .enumerate()
        .map(|(i, l)| (i + 2, l))
        .filter(|(_, l)| !l.is_empty()))
}

fn format_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn parse_field<T: std::str::FromStr>(path: &Path, line: usize, field: Option<&str>, what: &str) -> Result<T> {
    field
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| format_err(path, line, format!("bad or missing {what}")))
}

fn parse_key(path: &Path, line: usize, field: Option<&str>) -> Result<StateKey> {
    field
        .and_then(StateKey::from_hex)
        .ok_or_else(|| format_err(path, line, "bad or missing state key"))
}

pub fn read_text(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Writes `text`, creating parent directories as needed.
pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn file_digest(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(sha256_hex(&bytes))
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_and_header() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        let cfg = GameConfig::connect_k(4, 4, 3);
        let d = game_digest(&cfg);
        assert_eq!(d.len(), 64);
        assert_ne!(d, game_digest(&GameConfig::connect_k(4, 4, 4)));
        let h = header("qtable", &d);
        let p = Path::new("x");
        assert_eq!(parse_header(p, &h, "qtable").unwrap(), d);
        assert!(parse_header(p, &h, "counts").is_err());
        assert!(parse_header(p, &h.replace("format=1", "format=9"), "qtable").is_err());
        let svg = format!("<!-- {} -->", h.trim_end());
        assert_eq!(parse_header(p, &svg, "qtable").unwrap(), d);
    }
}
