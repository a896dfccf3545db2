// A short hand-driven episode: climb, then drift toward the users.

use std::sync::Arc;

use uavpos::config::load_scenario;
use uavpos::env::{Action, UavEnv};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = load_scenario(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/scenario_b.json"))?;
    let mut env = UavEnv::new(Arc::new(scenario))?;
    let obs = env.reset(1)?;
    println!("start {} nLoS {}", obs.position, obs.n_los);

    let plan = [(Action::Backward, 12), (Action::Up, 5), (Action::Stay, 3)];
    let mut total = 0.0;
    for (action, n) in plan {
        for _ in 0..n {
            let r = env.step(action)?;
            total += r.reward;
        }
        let p = env.position().expect("episode is running");
        println!(
            "after {:>3} x {:<8} at {}  reward {:.4}",
            n,
            action.name(),
            p,
            env.snapshot_reward(&p)?
        );
    }
    println!("return over {} steps: {total:.3}", env.steps_taken());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
