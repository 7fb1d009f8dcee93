//! Fully resolved description of one command-line job.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Deserializer, Serialize};
use serde_json::Value;

use crate::space::Space;
use crate::steiner::DEFAULT_TOL;

pub const DEFAULT_RESTARTS: usize = 50;
pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_TERMINALS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Dist,
    Mst,
    Smt,
    Sr,
    Search,
    Verify,
    Repro,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Command::Dist => "dist",
            Command::Mst => "mst",
            Command::Smt => "smt",
            Command::Sr => "sr",
            Command::Search => "search",
            Command::Verify => "verify",
            Command::Repro => "repro",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default = "default_space", deserialize_with = "space_field")]
    pub space: Space,
    /// Points in the chart of `space`; absent for commands that take none.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Value>,
    /// File holding `{"space": ..., "points": [...]}`; replaced by its contents once resolved.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Terminal count for `search`.
    #[serde(default = "default_terminals")]
    pub n: usize,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            space: default_space(),
            points: None,
            input: None,
            tol: DEFAULT_TOL,
            seed: 0,
            restarts: DEFAULT_RESTARTS,
            samples: DEFAULT_SAMPLES,
            n: DEFAULT_TERMINALS,
            format: Format::Json,
            svg: None,
        }
    }
}

fn default_space() -> Space {
    Space::Plane
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_restarts() -> usize {
    DEFAULT_RESTARTS
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_terminals() -> usize {
    DEFAULT_TERMINALS
}

/// Accepts the object form or a token such as `cone:2pi/3`.
pub(crate) fn space_field<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Space, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Token(String),
        Object(Value),
    }
    match Repr::deserialize(deserializer)? {
        Repr::Token(token) => token.parse().map_err(serde::de::Error::custom),
        Repr::Object(value) => serde_json::from_value(value).map_err(serde::de::Error::custom),
    }
}

/// Contents of an `input` file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct InputFile {
    #[serde(default, deserialize_with = "optional_space_field")]
    pub space: Option<Space>,
    pub points: Value,
}

fn optional_space_field<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Option<Space>, D::Error> {
    space_field(deserializer).map(Some)
}
