//! Reference DQN learner, the exhaustive grid oracle and the multi-seed
//! evaluation harness.

mod dqn;
mod evaluate;
mod oracle;
mod qnet;
mod replay;

pub use dqn::{act, train, train_step, EpsilonSchedule, TrainConfig, TrainOutcome};
pub use evaluate::{displaced_positions, evaluate_position, PositionEvaluation};
pub use oracle::{grid_oracle, lattice, OracleResult};
pub use qnet::{argmax, Adam, QNetwork};
pub use replay::{ReplayBuffer, Transition};
