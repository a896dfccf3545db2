use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::env::{reward_of, EnvConfig};
use crate::error::EnvError;
use crate::geometry::{inside_any_building, Interval, Position3};
use crate::linkmac::{analytic_evaluate, LinkReport};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub position: Position3,
    pub reward: f64,
    pub report: LinkReport,
    pub evaluated: usize,
}

/// `min, min + r, min + 2r, ...` up to `max` (inclusive, with slack for
/// rounding).
pub fn lattice(interval: &Interval, resolution: f64) -> Vec<f64> {
    let n = ((interval.span() / resolution) + 1e-9).floor() as usize;
    (0..=n).map(|i| interval.min + i as f64 * resolution).collect()
}

/// Exhaustive search over the action-zone lattice, skipping points inside
/// buildings. Returns the lexicographically smallest (x, y, z) among the
/// reward maximizers.
pub fn grid_oracle(
    scenario: &ScenarioConfig,
    env: &EnvConfig,
    resolution: f64,
) -> Result<OracleResult, EnvError> {
    assert!(resolution > 0.0, "resolution must be positive");
    let xs = lattice(&scenario.zone.x, resolution);
    let ys = lattice(&scenario.zone.y, resolution);
    let zs = lattice(&scenario.zone.z, resolution);

    let mut best: Option<(Position3, f64, LinkReport)> = None;
    let mut evaluated = 0;
    for &x in &xs {
        for &y in &ys {
            for &z in &zs {
                let p = Position3::new(x, y, z);
                if inside_any_building(&p, &scenario.buildings) {
                    continue;
                }
                let report = analytic_evaluate(scenario, &p)?;
                let reward = reward_of(scenario, env, &report);
                evaluated += 1;
                if best.as_ref().is_none_or(|(_, r, _)| reward > *r) {
                    best = Some((p, reward, report));
                }
            }
        }
    }
    let (position, reward, report) =
        best.ok_or_else(|| EnvError::InvalidScenario("zone lattice is empty".into()))?;
    Ok(OracleResult {
        position,
        reward,
        report,
        evaluated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_includes_both_ends() {
        let l = lattice(&Interval::new(2.0, 60.0), 2.5);
        assert_eq!(l.first(), Some(&2.0));
        assert_eq!(l.last(), Some(&59.5));
        assert_eq!(lattice(&Interval::new(0.0, 100.0), 2.5).len(), 41);
        assert_eq!(lattice(&Interval::new(0.0, 0.3), 0.1).len(), 4);
    }
}
