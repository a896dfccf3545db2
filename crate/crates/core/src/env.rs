//! Episodic UAV positioning environment.
//!
//! The agent observes the UAV position and how many users it sees, moves the
//! UAV one step along an axis (or holds), and is rewarded with a weighted sum
//! of the LoS share and the share of total demand actually carried.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::error::EnvError;
use crate::geometry::{clamp_to_zone, count_los, inside_any_building, Position3};
use crate::linkmac::{analytic_evaluate, link_budget, LinkReport, LinkSim, ThroughputMonitor};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvaluatorMode {
    /// Closed-form link evaluation at every step.
    #[default]
    Analytic,
    /// Packet-level simulation advanced by one decision interval per step.
    Des,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnvConfig {
    /// Seconds between decisions.
    pub decision_interval: f64,
    /// Seconds per episode.
    pub episode_duration: f64,
    /// Meters moved per non-stay action.
    pub step_m: f64,
    pub w1: f64,
    pub w2: f64,
    pub evaluator_mode: EvaluatorMode,
    /// Append normalized throughput to the learner's feature vector.
    pub throughput_in_observation: bool,
}

impl Default for EnvConfig {
    fn default() -> Self {
        Self {
            decision_interval: 0.1,
            episode_duration: 100.0,
            step_m: 1.0,
            w1: 0.8,
            w2: 0.2,
            evaluator_mode: EvaluatorMode::Analytic,
            throughput_in_observation: false,
        }
    }
}

impl EnvConfig {
    /// Number of decisions per episode.
    pub fn episode_steps(&self) -> u64 {
        (self.episode_duration / self.decision_interval).round() as u64
    }

    pub fn validate(&self) -> Result<(), (String, String)> {
        if !(self.decision_interval > 0.0 && self.decision_interval.is_finite()) {
            return Err(("decision_interval".into(), "must be positive".into()));
        }
        if !(self.episode_duration > 0.0 && self.episode_duration.is_finite()) {
            return Err(("episode_duration".into(), "must be positive".into()));
        }
        let ratio = self.episode_duration / self.decision_interval;
        if (ratio - ratio.round()).abs() > 1e-6 * ratio.max(1.0) || ratio.round() < 1.0 {
            return Err((
                "episode_duration".into(),
                "must be an integral multiple of decision_interval".into(),
            ));
        }
        if !(self.step_m > 0.0 && self.step_m.is_finite()) {
            return Err(("step_m".into(), "must be positive".into()));
        }
        if !(self.w1 >= 0.0 && self.w2 >= 0.0) {
            return Err(("w1".into(), "weights must be non-negative".into()));
        }
        if (self.w1 + self.w2 - 1.0).abs() > 1e-9 {
            return Err(("w2".into(), "w1 + w2 must equal 1".into()));
        }
        Ok(())
    }
}

/// The seven discrete moves. `Forward`/`Backward` run along y,
/// `Left`/`Right` along x, `Up`/`Down` along z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Up,
    Down,
    Forward,
    Backward,
    Left,
    Right,
    Stay,
}

impl Action {
    pub const COUNT: usize = 7;
    pub const ALL: [Action; 7] = [
        Action::Up,
        Action::Down,
        Action::Forward,
        Action::Backward,
        Action::Left,
        Action::Right,
        Action::Stay,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: i64) -> Result<Action, EnvError> {
        usize::try_from(code)
            .ok()
            .and_then(|i| Action::ALL.get(i).copied())
            .ok_or(EnvError::ActionOutOfRange(code))
    }

    pub fn name(self) -> &'static str {
        match self {
            Action::Up => "up",
            Action::Down => "down",
            Action::Forward => "forward",
            Action::Backward => "backward",
            Action::Left => "left",
            Action::Right => "right",
            Action::Stay => "stay",
        }
    }

    /// Unit displacement of this move.
    pub fn direction(self) -> [f64; 3] {
        match self {
            Action::Up => [0.0, 0.0, 1.0],
            Action::Down => [0.0, 0.0, -1.0],
            Action::Forward => [0.0, 1.0, 0.0],
            Action::Backward => [0.0, -1.0, 0.0],
            Action::Left => [-1.0, 0.0, 0.0],
            Action::Right => [1.0, 0.0, 0.0],
            Action::Stay => [0.0, 0.0, 0.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub position: Position3,
    /// Position scaled into [0, 1] by the action-zone extents.
    pub normalized: [f64; 3],
    pub n_los: usize,
    pub n_ues: usize,
    /// Normalized throughput, present only when enabled in [`EnvConfig`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub throughput: Option<f64>,
}

impl Observation {
    /// Learner input: normalized position, LoS share, then optionally the
    /// normalized throughput.
    pub fn features(&self) -> Vec<f64> {
        let mut f = self.normalized.to_vec();
        f.push(self.n_los as f64 / self.n_ues as f64);
        if let Some(t) = self.throughput {
            f.push(t);
        }
        f
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepInfo {
    pub aggregate_throughput: f64,
    pub mean_delay: f64,
    pub feasible: bool,
    pub n_los: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepResult {
    pub observation: Observation,
    pub reward: f64,
    pub done: bool,
    pub info: StepInfo,
}

/// `w1 * nLoS/N + w2 * min(throughput / total_demand, 1)`.
pub fn compute_reward(
    n_los: usize,
    n_ues: usize,
    throughput: f64,
    total_demand: f64,
    w1: f64,
    w2: f64,
) -> f64 {
    let los_share = n_los as f64 / n_ues as f64;
    let carried_share = (throughput / total_demand).clamp(0.0, 1.0);
    w1 * los_share + w2 * carried_share
}

#[derive(Debug)]
struct Episode {
    position: Position3,
    steps: u64,
    done: bool,
    sim: Option<(LinkSim, ThroughputMonitor)>,
}

/// One environment instance. Not shared between threads; run one per worker.
#[derive(Debug)]
pub struct UavEnv {
    scenario: Arc<ScenarioConfig>,
    cfg: EnvConfig,
    start: Position3,
    episode: Option<Episode>,
}

impl UavEnv {
    /// Uses the scenario's own `env` block.
    pub fn new(scenario: Arc<ScenarioConfig>) -> Result<Self, EnvError> {
        let cfg = scenario.env;
        Self::with_config(scenario, cfg)
    }

    pub fn with_config(scenario: Arc<ScenarioConfig>, cfg: EnvConfig) -> Result<Self, EnvError> {
        cfg.validate()
            .map_err(|(f, m)| EnvError::InvalidScenario(format!("env.{f}: {m}")))?;
        let start = scenario
            .initial_position()
            .map_err(|e| EnvError::InvalidScenario(e.to_string()))?;
        if !scenario.zone.contains(&start) || inside_any_building(&start, &scenario.buildings) {
            return Err(EnvError::InvalidScenario(format!(
                "initial position {start} is outside the zone or inside a building"
            )));
        }
        Ok(Self {
            scenario,
            cfg,
            start,
            episode: None,
        })
    }

    pub fn scenario(&self) -> &ScenarioConfig {
        &self.scenario
    }

    pub fn scenario_arc(&self) -> Arc<ScenarioConfig> {
        Arc::clone(&self.scenario)
    }

    pub fn config(&self) -> &EnvConfig {
        &self.cfg
    }

    pub fn initial_position(&self) -> Position3 {
        self.start
    }

    pub fn episode_steps(&self) -> u64 {
        self.cfg.episode_steps()
    }

    pub fn observation_dim(&self) -> usize {
        if self.cfg.throughput_in_observation {
            5
        } else {
            4
        }
    }

    pub fn position(&self) -> Option<Position3> {
        self.episode.as_ref().map(|e| e.position)
    }

    pub fn steps_taken(&self) -> u64 {
        self.episode.as_ref().map_or(0, |e| e.steps)
    }

    fn observe(&self, position: Position3, n_los: usize, throughput: f64) -> Observation {
        Observation {
            position,
            normalized: self.scenario.zone.normalize(&position),
            n_los,
            n_ues: self.scenario.ues.len(),
            throughput: self
                .cfg
                .throughput_in_observation
                .then(|| (throughput / self.scenario.total_demand()).clamp(0.0, 1.0)),
        }
    }

    /// Puts the UAV back at the initial position and zeroes all monitors.
    /// `seed` drives the traffic phases of the packet-level evaluator.
    pub fn reset(&mut self, seed: u64) -> Result<Observation, EnvError> {
        let sim = match self.cfg.evaluator_mode {
            EvaluatorMode::Analytic => None,
            EvaluatorMode::Des => {
                let demands: Vec<f64> = self.scenario.ues.iter().map(|u| u.demand).collect();
                Some((
                    LinkSim::new(&demands, &self.scenario.mac, seed),
                    ThroughputMonitor::new(self.cfg.decision_interval),
                ))
            }
        };
        self.episode = Some(Episode {
            position: self.start,
            steps: 0,
            done: false,
            sim,
        });
        let n_los = count_los(&self.start, &self.scenario.ue_positions(), &self.scenario.buildings);
        Ok(self.observe(self.start, n_los, 0.0))
    }

    /// Applies one move, evaluates the links over one decision interval and
    /// returns the reward.
    pub fn step(&mut self, action: Action) -> Result<StepResult, EnvError> {
        let total_steps = self.cfg.episode_steps();
        let interval = self.cfg.decision_interval;
        let step_m = self.cfg.step_m;
        let scenario = Arc::clone(&self.scenario);
        let episode = self.episode.as_mut().ok_or(EnvError::NotReset)?;
        if episode.done {
            return Err(EnvError::EpisodeFinished);
        }

        let d = action.direction();
        let p = episode.position;
        let proposed = Position3::new(p.x + d[0] * step_m, p.y + d[1] * step_m, p.z + d[2] * step_m);
        episode.position = clamp_to_zone(&proposed, &p, &scenario.zone, &scenario.buildings);
        episode.steps += 1;
        episode.done = episode.steps >= total_steps;
        let position = episode.position;

        let report = analytic_evaluate(&scenario, &position)?;
        let (throughput, mean_delay) = match episode.sim.as_mut() {
            None => (report.aggregate_throughput, report.mean_delay),
            Some((sim, monitor)) => {
                let rates: Vec<Option<f64>> = report
                    .links
                    .iter()
                    .map(|l| l.serviceable().then_some(l.phy_rate))
                    .collect();
                sim.set_rates(&rates, &scenario.mac);
                let now = episode.steps as f64 * interval;
                sim.advance(now, |d| monitor.record(d));
                (monitor.throughput(now), monitor.mean_delay(now))
            }
        };
        let n = scenario.ues.len();
        let reward = compute_reward(
            report.n_los,
            n,
            throughput,
            scenario.total_demand(),
            self.cfg.w1,
            self.cfg.w2,
        );
        let done = episode.done;
        log::debug!(
            "step {} action={} pos={} nlos={} thr={:.3} reward={:.6}",
            episode.steps,
            action.name(),
            position,
            report.n_los,
            throughput,
            reward
        );
        Ok(StepResult {
            observation: self.observe(position, report.n_los, throughput),
            reward,
            done,
            info: StepInfo {
                aggregate_throughput: throughput,
                mean_delay,
                feasible: report.feasible,
                n_los: report.n_los,
            },
        })
    }

    /// Same as [`UavEnv::step`] with a raw action code.
    pub fn step_code(&mut self, code: i64) -> Result<StepResult, EnvError> {
        self.step(Action::from_code(code)?)
    }

    /// One-shot analytic evaluation at a fixed position.
    pub fn snapshot(&self, position: &Position3) -> Result<LinkReport, EnvError> {
        snapshot(&self.scenario, position)
    }

    /// Reward the analytic evaluator assigns to `position`.
    pub fn snapshot_reward(&self, position: &Position3) -> Result<f64, EnvError> {
        snapshot_reward(&self.scenario, &self.cfg, position)
    }
}

pub fn snapshot(scenario: &ScenarioConfig, position: &Position3) -> Result<LinkReport, EnvError> {
    Ok(analytic_evaluate(scenario, position)?)
}

pub fn snapshot_reward(
    scenario: &ScenarioConfig,
    cfg: &EnvConfig,
    position: &Position3,
) -> Result<f64, EnvError> {
    let report = analytic_evaluate(scenario, position)?;
    Ok(reward_of(scenario, cfg, &report))
}

pub fn reward_of(scenario: &ScenarioConfig, cfg: &EnvConfig, report: &LinkReport) -> f64 {
    compute_reward(
        report.n_los,
        scenario.ues.len(),
        report.aggregate_throughput,
        scenario.total_demand(),
        cfg.w1,
        cfg.w2,
    )
}

/// Per-user PHY rates at a position, `None` where no MCS is viable.
pub fn link_rates(scenario: &ScenarioConfig, position: &Position3) -> Result<Vec<Option<f64>>, EnvError> {
    Ok(link_budget(scenario, position)?
        .iter()
        .map(|l| l.serviceable().then_some(l.phy_rate))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reward_examples() {
        assert_eq!(compute_reward(4, 4, 234.0, 234.0, 0.8, 0.2), 1.0);
        assert!((compute_reward(2, 4, 0.0, 234.0, 0.8, 0.2) - 0.4).abs() < 1e-12);
        assert!((compute_reward(3, 4, 117.0, 234.0, 0.8, 0.2) - 0.7).abs() < 1e-12);
        // Throughput above demand is capped.
        assert_eq!(compute_reward(4, 4, 500.0, 234.0, 0.8, 0.2), 1.0);
    }

    #[test]
    fn action_codes_round_trip() {
        for (i, a) in Action::ALL.iter().enumerate() {
            assert_eq!(a.code() as usize, i);
            assert_eq!(Action::from_code(i as i64).unwrap(), *a);
        }
        assert_eq!(Action::from_code(7), Err(EnvError::ActionOutOfRange(7)));
        assert_eq!(Action::from_code(-1), Err(EnvError::ActionOutOfRange(-1)));
    }

    #[test]
    fn episode_length_from_defaults() {
        assert_eq!(EnvConfig::default().episode_steps(), 1000);
        let bad = EnvConfig {
            episode_duration: 1.05,
            decision_interval: 0.1,
            ..EnvConfig::default()
        };
        assert!(bad.validate().is_err());
        let unbalanced = EnvConfig {
            w1: 0.5,
            ..EnvConfig::default()
        };
        assert!(unbalanced.validate().is_err());
    }
}
