use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{CandidatePosition, ScenarioConfig};
use crate::error::LinkError;
use crate::geometry::{clamp_to_zone, Position3};
use crate::linkmac::{des_run, DesOptions};
use crate::metrics::{MetricKind, MetricSeries};

/// Aggregate throughput and mean delay of one position across seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositionEvaluation {
    pub label: String,
    pub position: Position3,
    pub seeds: Vec<u64>,
    pub throughput: MetricSeries,
    pub delay: MetricSeries,
}

/// One packet-level run per seed at a fixed position. Runs fan out over the
/// rayon pool; samples are returned in seed order.
pub fn evaluate_position(
    scenario: &ScenarioConfig,
    label: &str,
    position: &Position3,
    seeds: &[u64],
    duration: f64,
) -> Result<PositionEvaluation, LinkError> {
    assert!(!seeds.is_empty(), "at least one seed is required");
    let runs: Vec<_> = seeds
        .par_iter()
        .map(|&seed| des_run(scenario, position, duration, seed, DesOptions::default()))
        .collect::<Result<_, _>>()?;
    Ok(PositionEvaluation {
        label: label.to_string(),
        position: *position,
        seeds: seeds.to_vec(),
        throughput: MetricSeries::new(
            label,
            MetricKind::ThroughputMbps,
            runs.iter().map(|r| r.aggregate_throughput).collect(),
        ),
        delay: MetricSeries::new(
            label,
            MetricKind::DelayS,
            runs.iter().map(|r| r.mean_delay).collect(),
        ),
    })
}

/// The five comparison points around an optimum: `distance` meters along
/// +x, -x, +y, -y and +z, clamped into the zone.
pub fn displaced_positions(
    scenario: &ScenarioConfig,
    optimum: &Position3,
    distance: f64,
) -> Vec<CandidatePosition> {
    let offsets = [
        [distance, 0.0, 0.0],
        [-distance, 0.0, 0.0],
        [0.0, distance, 0.0],
        [0.0, -distance, 0.0],
        [0.0, 0.0, distance],
    ];
    offsets
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let proposed = Position3::new(optimum.x + d[0], optimum.y + d[1], optimum.z + d[2]);
            CandidatePosition {
                label: format!("position{}", i + 1),
                position: clamp_to_zone(&proposed, optimum, &scenario.zone, &scenario.buildings),
            }
        })
        .collect()
}
