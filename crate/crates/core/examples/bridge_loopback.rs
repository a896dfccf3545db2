// Serves the environment on a local port and drives it over TCP.

use std::sync::Arc;

use uavpos::bridge::{RemoteEnv, Server};
use uavpos::config::load_scenario;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = Arc::new(load_scenario(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/scenarios/scenario_b.json"
    ))?);
    let server = Server::bind("127.0.0.1:0", Arc::clone(&scenario), scenario.env)?;
    let addr = server.local_addr()?;
    server.spawn();

    let mut remote = RemoteEnv::connect(addr)?;
    let spec = remote.spec().clone();
    println!(
        "session {} actions {:?} episode_steps {}",
        remote.session(),
        spec.actions,
        spec.episode_steps
    );
    let obs = remote.reset(3)?;
    println!("reset -> {} nLoS {}", obs.position, obs.n_los);
    for code in [3, 3, 3, 0, 6] {
        let r = remote.step(code)?;
        println!(
            "act {code} ({}) -> {} reward {:.4}",
            spec.actions[code as usize], r.observation.position, r.reward
        );
    }
    match remote.step(9) {
        Err(e) => println!("act 9 -> {e}"),
        Ok(_) => return Err("out-of-range action was accepted".into()),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
