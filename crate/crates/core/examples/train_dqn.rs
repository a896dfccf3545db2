// Trains the reference DQN briefly and reports the best visited position.
// `cargo run --release --example train_dqn -- 10` runs the full schedule.

use std::sync::Arc;

use uavpos::agent::train;
use uavpos::config::load_scenario;
use uavpos::env::UavEnv;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let episodes = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(2);
    let scenario = load_scenario(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/scenario_b.json"))?;
    let mut cfg = scenario.train.clone();
    cfg.episodes = episodes;
    let mut env = UavEnv::new(Arc::new(scenario))?;
    let outcome = train(&mut env, &cfg, 7)?;
    for (i, r) in outcome.episode_returns.iter().enumerate() {
        println!("episode {:>2} return {r:.2}", i + 1);
    }
    println!(
        "best position {} snapshot reward {:.4} after {} steps",
        outcome.best_position, outcome.best_reward, outcome.total_steps
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
