use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RadioError {
    #[error("degenerate geometry: distance {distance} m is below the 0.1 m minimum")]
    DegenerateGeometry { distance: f64 },
    #[error("antenna heights must be positive (uav {h_uav} m, ue {h_ue} m)")]
    AntennaHeight { h_uav: f64, h_ue: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinkError {
    #[error("demand of {demand} Mbit/s exceeds the fastest PHY rate {max_rate} Mbit/s")]
    DemandUnserviceable { demand: f64, max_rate: f64 },
    #[error(transparent)]
    Radio(#[from] RadioError),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: parse error: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

impl ConfigError {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Field path of a validation failure, if this is one.
    pub fn field(&self) -> Option<&str> {
        match self {
            ConfigError::Invalid { field, .. } => Some(field),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("episode finished; call reset")]
    EpisodeFinished,
    #[error("environment has not been reset")]
    NotReset,
    #[error("action out of range: {0}")]
    ActionOutOfRange(i64),
    #[error(transparent)]
    Link(#[from] LinkError),
}

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("empty series")]
    EmptySeries,
    #[error("series {label}: sample {value} is negative or not finite")]
    BadSample { label: String, value: f64 },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum WireError {
    #[error("frame error: {0}")]
    Frame(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
