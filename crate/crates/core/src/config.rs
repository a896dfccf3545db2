//! Scenario files: venue, buildings, users, radio and learning parameters.
//!
//! Scenarios are JSON documents. Optional blocks fall back to module
//! defaults; everything is validated on load and failures name the offending
//! field path (for example `ues[2].position`).

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agent::TrainConfig;
use crate::env::EnvConfig;
use crate::error::ConfigError;
use crate::geometry::{inside_any_building, ActionZone, Building, Interval, Position3, Venue};
use crate::linkmac::{MacParams, UeSpec};
use crate::radio::{NlosStreetParams, PropagationMode, RadioConfig};

/// Where the UAV starts each episode. This is also the baseline position.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialPosition {
    /// Venue center at 10 m altitude.
    VenueCenterZ10,
    /// 5 m above the roof of the building closest to the venue center.
    #[serde(rename = "above_central_building_5m")]
    AboveCentralBuilding5m,
    Explicit(Position3),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogLevel {
    Error,
    Warning,
    #[default]
    Info,
    Debug,
}

impl LogLevel {
    pub fn to_filter(self) -> log::LevelFilter {
        match self {
            LogLevel::Error => log::LevelFilter::Error,
            LogLevel::Warning => log::LevelFilter::Warn,
            LogLevel::Info => log::LevelFilter::Info,
            LogLevel::Debug => log::LevelFilter::Debug,
        }
    }
}

impl std::str::FromStr for LogLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "error" => Ok(LogLevel::Error),
            "warning" | "warn" => Ok(LogLevel::Warning),
            "info" => Ok(LogLevel::Info),
            "debug" => Ok(LogLevel::Debug),
            other => Err(format!("unknown log level {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidatePosition {
    pub label: String,
    pub position: Position3,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: String,
    pub venue: Venue,
    #[serde(default)]
    pub buildings: Vec<Building>,
    pub ues: Vec<UeSpec>,
    #[serde(default)]
    pub radio: RadioConfig,
    /// Filled from the buildings on load when absent.
    #[serde(default)]
    pub street: Option<NlosStreetParams>,
    #[serde(default)]
    pub mac: MacParams,
    pub zone: ActionZone,
    #[serde(default)]
    pub env: EnvConfig,
    #[serde(default)]
    pub train: TrainConfig,
    pub initial_position: InitialPosition,
    #[serde(default)]
    pub candidate_positions: Vec<CandidatePosition>,
    #[serde(default)]
    pub log_level: LogLevel,
}

impl ScenarioConfig {
    /// Parses and validates a scenario document.
    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg: ScenarioConfig =
            serde_json::from_str(text).map_err(|source| ConfigError::Parse {
                path: "<string>".into(),
                source,
            })?;
        cfg.resolve_defaults();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    fn resolve_defaults(&mut self) {
        if self.street.is_none() {
            let mut street = NlosStreetParams::default();
            if !self.buildings.is_empty() {
                street.avg_rooftop_height = self.buildings.iter().map(|b| b.height).sum::<f64>()
                    / self.buildings.len() as f64;
            }
            self.street = Some(street);
        }
    }

    pub fn propagation_mode(&self) -> PropagationMode {
        if self.buildings.is_empty() {
            PropagationMode::FreeSpace
        } else {
            PropagationMode::Urban
        }
    }

    pub fn street_params(&self) -> NlosStreetParams {
        self.street.unwrap_or_default()
    }

    pub fn ue_positions(&self) -> Vec<Position3> {
        self.ues.iter().map(|u| u.position).collect()
    }

    pub fn total_demand(&self) -> f64 {
        self.ues.iter().map(|u| u.demand).sum()
    }

    /// Building whose footprint center is nearest the venue center.
    pub fn central_building(&self) -> Option<&Building> {
        let (cx, cy) = self.venue.center();
        self.buildings.iter().min_by(|a, b| {
            let da = dist2(a.center(), (cx, cy));
            let db = dist2(b.center(), (cx, cy));
            da.total_cmp(&db)
        })
    }

    /// Resolves the initial-position rule to coordinates.
    pub fn initial_position(&self) -> Result<Position3, ConfigError> {
        match self.initial_position {
            InitialPosition::VenueCenterZ10 => {
                let (cx, cy) = self.venue.center();
                Ok(Position3::new(cx, cy, 10.0))
            }
            InitialPosition::AboveCentralBuilding5m => {
                let b = self.central_building().ok_or_else(|| {
                    ConfigError::invalid(
                        "initial_position",
                        "above_central_building_5m needs at least one building",
                    )
                })?;
                let (cx, cy) = b.center();
                Ok(Position3::new(cx, cy, b.height + 5.0))
            }
            InitialPosition::Explicit(p) => Ok(p),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let v = &self.venue;
        if !(v.width > 0.0 && v.depth > 0.0 && v.width.is_finite() && v.depth.is_finite()) {
            return Err(ConfigError::invalid("venue", "width and depth must be positive"));
        }
        for (i, b) in self.buildings.iter().enumerate() {
            if !b.is_valid() {
                return Err(ConfigError::invalid(
                    format!("buildings[{i}]"),
                    "needs x_min < x_max, y_min < y_max and height > 0",
                ));
            }
            if !v.contains_footprint(b) {
                return Err(ConfigError::invalid(
                    format!("buildings[{i}]"),
                    "footprint lies outside the venue",
                ));
            }
        }
        if self.ues.is_empty() {
            return Err(ConfigError::invalid("ues", "at least one user is required"));
        }
        self.radio
            .validate()
            .map_err(|(f, m)| ConfigError::invalid(format!("radio.{f}"), m))?;
        for (i, ue) in self.ues.iter().enumerate() {
            let p = &ue.position;
            if !p.is_finite() || p.z < 0.0 || !v.contains_xy(p.x, p.y) {
                return Err(ConfigError::invalid(
                    format!("ues[{i}].position"),
                    "must be finite and inside the venue with z >= 0",
                ));
            }
            if inside_any_building(p, &self.buildings) {
                return Err(ConfigError::invalid(
                    format!("ues[{i}].position"),
                    "lies inside a building",
                ));
            }
            if !(ue.demand > 0.0 && ue.demand.is_finite()) {
                return Err(ConfigError::invalid(format!("ues[{i}].demand"), "must be positive"));
            }
            ue.required_mcs(&self.radio.mcs_table)
                .map_err(|e| ConfigError::invalid(format!("ues[{i}].demand"), e.to_string()))?;
        }
        if let Some(street) = &self.street {
            street
                .validate()
                .map_err(|(f, m)| ConfigError::invalid(format!("street.{f}"), m))?;
        }
        self.mac
            .validate()
            .map_err(|(f, m)| ConfigError::invalid(format!("mac.{f}"), m))?;
        if !self.zone.is_valid() {
            return Err(ConfigError::invalid(
                "zone",
                "intervals must be finite, non-empty and z.min >= 0",
            ));
        }
        self.env
            .validate()
            .map_err(|(f, m)| ConfigError::invalid(format!("env.{f}"), m))?;
        self.train
            .validate()
            .map_err(|(f, m)| ConfigError::invalid(format!("train.{f}"), m))?;
        let start = self.initial_position()?;
        if !self.zone.contains(&start) || inside_any_building(&start, &self.buildings) {
            return Err(ConfigError::invalid(
                "initial_position",
                format!("{start} is outside the zone or inside a building"),
            ));
        }
        for (i, c) in self.candidate_positions.iter().enumerate() {
            if !c.position.is_finite() {
                return Err(ConfigError::invalid(
                    format!("candidate_positions[{i}].position"),
                    "must be finite",
                ));
            }
        }
        Ok(())
    }
}

fn dist2(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)
}

/// Reads, defaults and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ScenarioConfig::from_json_str(&text).map_err(|e| match e {
        ConfigError::Parse { source, .. } => ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

pub fn save_scenario(cfg: &ScenarioConfig, path: impl AsRef<Path>) -> Result<(), ConfigError> {
    let path = path.as_ref();
    std::fs::write(path, cfg.to_json_string() + "\n").map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// `n` users placed uniformly at random at antenna height `z` over the
/// venue, reproducible from `seed`. Positions are rounded to centimeters.
pub fn random_ues(n: usize, venue: &Venue, z: f64, demand: f64, seed: u64) -> Vec<UeSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let x = (rng.random::<f64>() * venue.width * 100.0).round() / 100.0;
            let y = (rng.random::<f64>() * venue.depth * 100.0).round() / 100.0;
            UeSpec {
                id: i as u32,
                position: Position3::new(x, y, z),
                demand,
            }
        })
        .collect()
}

/// Zone spanning the whole venue between the given altitudes.
pub fn venue_zone(venue: &Venue, z_min: f64, z_max: f64) -> ActionZone {
    ActionZone {
        x: Interval::new(0.0, venue.width),
        y: Interval::new(0.0, venue.depth),
        z: Interval::new(z_min, z_max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> String {
        r#"{
            "venue": {"width": 100, "depth": 100},
            "buildings": [{"x_min": 40, "x_max": 60, "y_min": 40, "y_max": 60, "height": 15}],
            "ues": [
                {"id": 0, "position": {"x": 10, "y": 10, "z": 1.5}, "demand": 58.5},
                {"id": 1, "position": {"x": 90, "y": 10, "z": 1.5}, "demand": 58.5}
            ],
            "zone": {"x": {"min": 0, "max": 100}, "y": {"min": 0, "max": 100}, "z": {"min": 2, "max": 60}},
            "initial_position": "above_central_building_5m"
        }"#
        .to_string()
    }

    #[test]
    fn defaults_fill_in() {
        let cfg = ScenarioConfig::from_json_str(&minimal()).unwrap();
        assert_eq!(cfg.radio, RadioConfig::default());
        assert_eq!(cfg.mac, MacParams::default());
        assert_eq!(cfg.street.unwrap().avg_rooftop_height, 15.0);
        assert_eq!(cfg.initial_position().unwrap(), Position3::new(50.0, 50.0, 20.0));
        assert_eq!(cfg.propagation_mode(), PropagationMode::Urban);
    }

    #[test]
    fn ue_inside_building_names_field() {
        let text = minimal().replace(
            r#"{"id": 1, "position": {"x": 90, "y": 10, "z": 1.5}"#,
            r#"{"id": 1, "position": {"x": 50, "y": 50, "z": 1.5}"#,
        );
        let err = ScenarioConfig::from_json_str(&text).unwrap_err();
        assert_eq!(err.field(), Some("ues[1].position"));
    }

    #[test]
    fn unknown_top_level_field_is_rejected() {
        let text = minimal().replacen('{', r#"{"venu": 3,"#, 1);
        assert!(matches!(
            ScenarioConfig::from_json_str(&text),
            Err(ConfigError::Parse { .. })
        ));
    }

    #[test]
    fn demand_above_table_is_rejected() {
        let text = minimal().replacen("58.5", "900", 1);
        let err = ScenarioConfig::from_json_str(&text).unwrap_err();
        assert_eq!(err.field(), Some("ues[0].demand"));
    }

    #[test]
    fn start_inside_building_is_rejected() {
        let text = minimal().replace(
            r#""above_central_building_5m""#,
            r#"{"explicit": {"x": 50, "y": 50, "z": 5}}"#,
        );
        let err = ScenarioConfig::from_json_str(&text).unwrap_err();
        assert_eq!(err.field(), Some("initial_position"));
    }

    #[test]
    fn serialize_round_trip_is_fixed_point() {
        let a = ScenarioConfig::from_json_str(&minimal()).unwrap();
        let b = ScenarioConfig::from_json_str(&a.to_json_string()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json_string(), b.to_json_string());
    }

    #[test]
    fn random_ues_are_reproducible() {
        let v = Venue {
            width: 100.0,
            depth: 100.0,
        };
        assert_eq!(random_ues(20, &v, 1.5, 58.5, 7), random_ues(20, &v, 1.5, 58.5, 7));
        assert_ne!(random_ues(20, &v, 1.5, 58.5, 7), random_ues(20, &v, 1.5, 58.5, 8));
    }
}
