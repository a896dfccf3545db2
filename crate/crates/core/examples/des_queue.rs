// Packet-level run next to the closed-form estimate at the same position.

use uavpos::config::load_scenario;
use uavpos::linkmac::{analytic_evaluate, des_run, DesOptions};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = load_scenario(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/scenario_b.json"))?;
    for c in scenario.candidate_positions.iter().take(3) {
        let analytic = analytic_evaluate(&scenario, &c.position)?;
        let des = des_run(&scenario, &c.position, 5.0, 1, DesOptions::default())?;
        println!(
            "{:<10} analytic {:7.2} Mbit/s  des {:7.2} Mbit/s  mean delay {:.3e} s  packets {}",
            c.label,
            analytic.aggregate_throughput,
            des.aggregate_throughput,
            des.mean_delay,
            des.delivered_packets
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
