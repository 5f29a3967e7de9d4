use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;
use underapprox::exec::Execution;
use underapprox::{
    Error, Result, DEFAULT_CLAIM_CAP, DEFAULT_DIGITS, DEFAULT_NODE_CAP, DEFAULT_TERM_CAP,
    MAX_DIGITS,
};

use crate::cli::GlobalArgs;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Human,
    Json,
    Csv,
}

/// Keys accepted in the TOML config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    digits: Option<u32>,
    term_cap: Option<usize>,
    claim_cap: Option<usize>,
    node_cap: Option<u64>,
    cache_path: Option<PathBuf>,
    no_cache: Option<bool>,
    format: Option<Format>,
    sequential: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub digits: u32,
    pub term_cap: usize,
    pub claim_cap: usize,
    pub node_cap: u64,
    pub cache_path: Option<PathBuf>,
    pub format: Format,
    pub execution: Execution,
}

fn default_cache_path() -> PathBuf {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache")))
        .unwrap_or_else(|| PathBuf::from("."));
    base.join("underapprox").join("best_under.ndjson")
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn positive<T: PartialOrd + Default + std::fmt::Display>(name: &str, v: T) -> Result<T> {
    if v > T::default() {
        Ok(v)
    } else {
        Err(Error::InvalidInput(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

impl Config {
    /// Flags and environment (already merged by clap), then the config file,
    /// then defaults.
    pub fn resolve(args: &GlobalArgs) -> Result<Config> {
        let file = match &args.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let digits = positive(
            "digits",
            args.digits.or(file.digits).unwrap_or(DEFAULT_DIGITS),
        )?;
        if digits > MAX_DIGITS {
            return Err(Error::CapExceeded {
                what: "digits",
                requested: digits.into(),
                cap: MAX_DIGITS.into(),
            });
        }
        let no_cache = args.no_cache || file.no_cache.unwrap_or(false);
        let cache_path = (!no_cache).then(|| {
            args.cache_path
                .clone()
                .or(file.cache_path)
                .unwrap_or_else(default_cache_path)
        });
        let sequential = args.sequential || file.sequential.unwrap_or(false);
        Ok(Config {
            digits,
            term_cap: positive(
                "term cap",
                args.term_cap.or(file.term_cap).unwrap_or(DEFAULT_TERM_CAP),
            )?,
            claim_cap: positive(
                "claim cap",
                args.claim_cap
                    .or(file.claim_cap)
                    .unwrap_or(DEFAULT_CLAIM_CAP),
            )?,
            node_cap: positive(
                "node cap",
                args.node_cap.or(file.node_cap).unwrap_or(DEFAULT_NODE_CAP),
            )?,
            cache_path,
            format: args.format.or(file.format).unwrap_or_default(),
            execution: if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            },
        })
    }
}
