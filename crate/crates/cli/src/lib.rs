//! Library side of the `galesolve` command: run configuration, exit
//! statuses, the verbs, instance generators and the sweep harness.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use galesolve::verify::DEFAULT_CAP;
use galesolve::winlose::DEFAULT_ALPHA_MAX;
use galesolve::Error;

pub mod commands;
pub mod generate;
pub mod sweep;

pub const DEFAULT_SEED: u64 = 1;

/// Exit statuses of the command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Refuted,
    Usage,
    Resource,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Refuted => 2,
            Status::Usage => 3,
            Status::Resource => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { status: Status::Usage, message: message.into() }
    }

    pub fn refuted(message: impl Into<String>) -> Self {
        CliError { status: Status::Refuted, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::LevelBound { .. } | Error::CapExceeded { .. } => Status::Resource,
            Error::Construction(_) | Error::Oracle(_) => Status::Refuted,
            _ => Status::Usage,
        };
        CliError { status, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Settings shared by every verb. The seed is written into every generated
/// artifact and report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    pub alpha_max: usize,
    /// Largest profile or strategy space the brute-force checkers enumerate.
    pub cap: u128,
    /// Quantifier bound of generated bit inputs.
    pub bound: u64,
    /// History-dependent prefix length of the deviation guard.
    pub depth: usize,
    /// Lassos sampled per instance in the duality sweep.
    pub lassos: usize,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            alpha_max: DEFAULT_ALPHA_MAX,
            cap: DEFAULT_CAP,
            bound: 2,
            depth: 3,
            lassos: 1000,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        let bounds = [
            ("alpha-max", self.alpha_max as u128),
            ("cap", self.cap),
            ("bound", self.bound as u128),
            ("depth", self.depth as u128),
            ("lassos", self.lassos as u128),
        ];
        match bounds.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(CliError::usage(format!("--{name} must be positive"))),
            None => Ok(()),
        }
    }

    /// Writes `contents` to `name` inside the output directory and returns
    /// the path, or `None` when no directory is configured.
    pub fn write(&self, name: &str, contents: &str) -> CliResult<Option<PathBuf>> {
        let Some(dir) = &self.out else { return Ok(None) };
        fs::create_dir_all(dir)?;
        let path = dir.join(name);
        fs::write(&path, contents)?;
        Ok(Some(path))
    }
}

/// What a verb prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub stdout: String,
}

impl Outcome {
    pub fn pass(stdout: String) -> Self {
        Outcome { status: Status::Pass, stdout }
    }
}

pub(crate) fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// File stem used for artifacts derived from `path`.
pub(crate) fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "game".to_string(), |s| s.to_string_lossy().into_owned())
}
