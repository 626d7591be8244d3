use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::ArgMatches;
use rfa_core::exec::{self, Exec};
use rfa_core::game::{Game, GameConfig};
use rfa_core::io::{self, KeyValues};
use rfa_core::Error;

use crate::args::Common;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments; exit status 2.
    Usage(String),
    /// Failure while running; exit status 1.
    Runtime(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::MissingVictimTable(_)
            | Error::InvalidParameter(_)
            | Error::InvalidParams(_)
            | Error::InvalidConfig(_)
            | Error::InvalidOrder(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Resolves a game preset name.
pub fn game_config(name: &str) -> CliResult<GameConfig> {
    let dims = |spec: &str| -> CliResult<[usize; 3]> {
        let v: Vec<usize> = spec.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>()
            .map_err(|_| CliError::Usage(format!("bad game dimensions `{spec}`")))?;
        v.try_into().map_err(|_| CliError::Usage(format!("expected three numbers in `{spec}`")))
    };
    let cfg = match name {
        "connect-k" | "connect-k-4x4" => GameConfig::connect_k(4, 4, 3),
        "connect-k-3x3" => GameConfig::connect_k(3, 3, 3),
        "breakthrough-variant" | "breakthrough-variant-4x4" => GameConfig::breakthrough(4, 4, 1),
        "breakthrough-variant-3x3" => GameConfig::breakthrough(3, 3, 1),
        _ => match name.split_once(':') {
            Some(("connect-k", d)) => {
                let [r, c, k] = dims(d)?;
                GameConfig::connect_k(r, c, k)
            }
            Some(("breakthrough-variant", d)) => {
                let [r, c, p] = dims(d)?;
                GameConfig::breakthrough(r, c, p)
            }
            _ => return usage(format!("unknown game `{name}`")),
        },
    };
    cfg.validate()?;
    Ok(cfg)
}

pub struct Ctx {
    pub game: Game,
    pub digest: String,
    pub exec: Exec,
    pub seed: u64,
}

impl Ctx {
    pub fn new(common: &Common) -> CliResult<Ctx> {
        let cfg = game_config(&common.game)?;
        let jobs = common.jobs as usize;
        if jobs > 1 {
            exec::set_threads(jobs);
        }
        Ok(Ctx {
            digest: io::game_digest(&cfg),
            game: Game::new(cfg)?,
            exec: Exec::from_jobs(jobs),
            seed: common.seed,
        })
    }
}

/// The settings that determine a run's output, taken from the parsed flags
/// including defaults. Thread count and the config path are left out.
pub fn effective_config(matches: &ArgMatches) -> KeyValues {
    let mut kv = KeyValues::new();
    for id in matches.ids() {
        let id = id.as_str();
        if matches!(id, "config" | "jobs") {
            continue;
        }
        if let Ok(Some(raw)) = matches.try_get_raw(id) {
            let v: Vec<String> = raw.map(|x| x.to_string_lossy().into_owned()).collect();
            kv.set(id, v.join(","));
        }
    }
    kv
}

pub fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// Writes `config<suffix>.txt` and `manifest<suffix>.txt` into `dir`.
///
/// The manifest names the SHA-256 of the config file's bytes and of every
/// output. It is the only file carrying timestamps.
pub struct Manifest {
    pub dir: PathBuf,
    pub suffix: String,
    pub started: u64,
    pub outputs: Vec<(String, PathBuf)>,
    pub extra: KeyValues,
}

impl Manifest {
    pub fn new(dir: &Path, suffix: &str) -> Self {
        Manifest {
            dir: dir.to_path_buf(),
            suffix: suffix.to_string(),
            started: unix_now(),
            outputs: Vec::new(),
            extra: KeyValues::new(),
        }
    }

    pub fn path(&self, file: &str) -> PathBuf {
        self.dir.join(file)
    }

    pub fn output(&mut self, name: &str, path: PathBuf) {
        self.outputs.push((name.to_string(), path));
    }

    pub fn write(self, ctx: &Ctx, config: &KeyValues) -> CliResult<PathBuf> {
        let config_path = self.dir.join(format!("config{}.txt", self.suffix));
        io::write_text(&config_path, &config.render("config", &ctx.digest))?;
        let mut m = self.extra;
        m.set("format_version", io::FORMAT_VERSION)
            .set("seed", ctx.seed)
            .set("config_file", config_path.display())
            .set("config_digest", io::file_digest(&config_path)?)
            .set("started_unix", self.started)
            .set("finished_unix", unix_now());
        for (name, path) in &self.outputs {
            m.set(&format!("output.{name}"), path.display());
            m.set(&format!("output.{name}.sha256"), io::file_digest(path)?);
        }
        let path = self.dir.join(format!("manifest{}.txt", self.suffix));
        io::write_text(&path, &m.render("manifest", &ctx.digest))?;
        Ok(path)
    }
}

/// Fails with exit status 1 when an input produced by an earlier step is
/// missing.
pub fn require_input(path: &Path, what: &str) -> CliResult<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(CliError::Runtime(format!(
            "missing upstream artifact: expected {what} at {}",
            path.display()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        assert_eq!(game_config("connect-k").unwrap(), GameConfig::connect_k(4, 4, 3));
        assert_eq!(game_config("breakthrough-variant:3,4,1").unwrap(), GameConfig::breakthrough(3, 4, 1));
        assert_eq!(game_config("chess").unwrap_err().code(), 2);
        assert_eq!(game_config("connect-k:3,3").unwrap_err().code(), 2);
        assert_eq!(game_config("connect-k:3,3,9").unwrap_err().code(), 2);
    }
}
