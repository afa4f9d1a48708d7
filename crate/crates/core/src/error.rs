use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MemoryError {
    #[error("sonar timestamp {sonar} and range timestamp {range} differ")]
    MismatchedTimestamps { sonar: f64, range: f64 },
    #[error("frame timestamp {got} is not after newest stored timestamp {newest}")]
    OutOfOrder { got: f64, newest: f64 },
    #[error("window holds {have} frame(s), need at least {need}")]
    InsufficientHistory { have: usize, need: usize },
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario:\n  - {}", .0.join("\n  - "))]
    Invalid(Vec<String>),
    #[error("unknown preset `{name}`; available presets: {}", .available.join(", "))]
    UnknownPreset {
        name: String,
        available: Vec<&'static str>,
    },
}

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("trace is empty")]
    EmptyTrace,
    #[error("failed to write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error, PartialEq)]
pub enum FeatureError {
    #[error("goal on {got} passed to the {expected} goal map")]
    GoalMismatch {
        expected: &'static str,
        got: &'static str,
    },
    #[error("invalid goal: {0}")]
    InvalidGoal(String),
}
