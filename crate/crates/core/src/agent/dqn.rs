use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::env::{Action, UavEnv};
use crate::error::EnvError;
use crate::geometry::Position3;

use super::qnet::{argmax, Adam, QNetwork};
use super::replay::{ReplayBuffer, Transition};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EpsilonSchedule {
    pub start: f64,
    pub end: f64,
    /// Share of all training steps over which epsilon decays linearly.
    pub decay_fraction: f64,
}

impl Default for EpsilonSchedule {
    fn default() -> Self {
        Self {
            start: 1.0,
            end: 0.05,
            decay_fraction: 0.6,
        }
    }
}

impl EpsilonSchedule {
    pub fn value(&self, step: u64, total_steps: u64) -> f64 {
        let decay_steps = (self.decay_fraction * total_steps as f64).max(1.0);
        let progress = (step as f64 / decay_steps).min(1.0);
        self.start + (self.end - self.start) * progress
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub episodes: u32,
    pub eval_episodes: u32,
    pub batch: usize,
    pub learning_rate: f64,
    pub epsilon: EpsilonSchedule,
    pub gamma: f64,
    pub target_sync: u64,
    pub warmup: usize,
    pub buffer_capacity: usize,
    pub hidden: Vec<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            episodes: 10,
            eval_episodes: 1,
            batch: 64,
            learning_rate: 1e-2,
            epsilon: EpsilonSchedule::default(),
            gamma: 0.95,
            target_sync: 200,
            warmup: 500,
            buffer_capacity: 1_000_000,
            hidden: vec![32, 32],
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), (String, String)> {
        if self.episodes == 0 {
            return Err(("episodes".into(), "must be positive".into()));
        }
        if self.batch == 0 {
            return Err(("batch".into(), "must be positive".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(("learning_rate".into(), "must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(("gamma".into(), "must be in [0, 1)".into()));
        }
        if self.target_sync == 0 {
            return Err(("target_sync".into(), "must be positive".into()));
        }
        if self.buffer_capacity == 0 {
            return Err(("buffer_capacity".into(), "must be positive".into()));
        }
        if self.hidden.is_empty() || self.hidden.contains(&0) {
            return Err(("hidden".into(), "layer sizes must be positive".into()));
        }
        let e = &self.epsilon;
        if !((0.0..=1.0).contains(&e.start) && (0.0..=1.0).contains(&e.end)) {
            return Err(("epsilon".into(), "start and end must be in [0, 1]".into()));
        }
        if !(e.decay_fraction > 0.0 && e.decay_fraction <= 1.0) {
            return Err(("epsilon.decay_fraction".into(), "must be in (0, 1]".into()));
        }
        Ok(())
    }

    pub fn layer_sizes(&self, obs_dim: usize) -> Vec<usize> {
        let mut sizes = vec![obs_dim];
        sizes.extend(&self.hidden);
        sizes.push(Action::COUNT);
        sizes
    }
}

/// Epsilon-greedy: uniform over the seven moves with probability `epsilon`,
/// otherwise the greedy action (ties to the lowest code).
pub fn act(net: &QNetwork, features: &[f64], epsilon: f64, rng: &mut impl Rng) -> Action {
    if rng.random::<f64>() < epsilon {
        Action::ALL[rng.random_range(0..Action::COUNT)]
    } else {
        Action::ALL[argmax(&net.forward(features))]
    }
}

/// One Q-learning update on `batch`. Targets are
/// `r + (1 - done) * gamma * max_a Q_target(next_obs, a)`. Returns the loss
/// before the update.
pub fn train_step(
    net: &mut QNetwork,
    target: &QNetwork,
    batch: &[&Transition],
    gamma: f64,
    optimizer: &mut Adam,
) -> f64 {
    let targets: Vec<f64> = batch
        .iter()
        .map(|t| {
            if t.done {
                t.reward
            } else {
                let next = target.forward(&t.next_obs);
                t.reward + gamma * next.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            }
        })
        .collect();
    let inputs: Vec<Vec<f64>> = batch.iter().map(|t| t.obs.clone()).collect();
    let actions: Vec<usize> = batch.iter().map(|t| t.action).collect();
    let (loss, grad) = net.loss_and_grad(&inputs, &actions, &targets);
    optimizer.step(net.params_mut(), &grad);
    loss
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainOutcome {
    pub policy: QNetwork,
    /// Sum of rewards per training episode.
    pub episode_returns: Vec<f64>,
    /// Sum of rewards per greedy evaluation episode.
    pub eval_returns: Vec<f64>,
    /// Visited position with the highest snapshot reward (earliest on ties).
    pub best_position: Position3,
    pub best_reward: f64,
    pub total_steps: u64,
}

fn episode_seed(seed: u64, episode: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(episode)
}

/// Trains a DQN policy on `env`. Deterministic in `seed`.
pub fn train(env: &mut UavEnv, cfg: &TrainConfig, seed: u64) -> Result<TrainOutcome, EnvError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut net = QNetwork::new(&cfg.layer_sizes(env.observation_dim()), &mut rng);
    let mut target = net.clone();
    let mut optimizer = Adam::new(cfg.learning_rate, net.num_params());
    let mut buffer = ReplayBuffer::new(cfg.buffer_capacity);

    let steps_per_episode = env.episode_steps();
    let total_steps = steps_per_episode * u64::from(cfg.episodes);
    let mut global_step = 0_u64;
    let mut episode_returns = Vec::with_capacity(cfg.episodes as usize);

    let start = env.initial_position();
    let mut best_position = start;
    let mut best_reward = env.snapshot_reward(&start)?;

    for episode in 0..u64::from(cfg.episodes) {
        let mut obs = env.reset(episode_seed(seed, episode))?;
        let mut ret = 0.0;
        loop {
            let epsilon = cfg.epsilon.value(global_step, total_steps);
            let features = obs.features();
            let action = act(&net, &features, epsilon, &mut rng);
            let result = env.step(action)?;
            global_step += 1;
            ret += result.reward;

            let position = result.observation.position;
            let snapshot = env.snapshot_reward(&position)?;
            if snapshot > best_reward {
                best_reward = snapshot;
                best_position = position;
            }

            buffer.push(Transition {
                obs: features,
                action: action.code() as usize,
                reward: result.reward,
                next_obs: result.observation.features(),
                done: result.done,
            });
            if buffer.len() >= cfg.warmup.max(1) {
                let batch = buffer.sample(cfg.batch, &mut rng);
                train_step(&mut net, &target, &batch, cfg.gamma, &mut optimizer);
            }
            if global_step.is_multiple_of(cfg.target_sync) {
                target = net.clone();
            }
            obs = result.observation;
            if result.done {
                break;
            }
        }
        log::info!(
            "episode {}/{} return {:.3} best reward {:.4} at {}",
            episode + 1,
            cfg.episodes,
            ret,
            best_reward,
            best_position
        );
        episode_returns.push(ret);
    }

    let mut eval_returns = Vec::with_capacity(cfg.eval_episodes as usize);
    for k in 0..u64::from(cfg.eval_episodes) {
        let mut obs = env.reset(episode_seed(seed, u64::from(cfg.episodes) + k))?;
        let mut ret = 0.0;
        loop {
            let action = act(&net, &obs.features(), 0.0, &mut rng);
            let result = env.step(action)?;
            ret += result.reward;
            let snapshot = env.snapshot_reward(&result.observation.position)?;
            if snapshot > best_reward {
                best_reward = snapshot;
                best_position = result.observation.position;
            }
            obs = result.observation;
            if result.done {
                break;
            }
        }
        eval_returns.push(ret);
    }

    Ok(TrainOutcome {
        policy: net,
        episode_returns,
        eval_returns,
        best_position,
        best_reward,
        total_steps: global_step,
    })
}
