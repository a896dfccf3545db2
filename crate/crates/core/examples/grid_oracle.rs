// Exhaustive lattice search at two resolutions.

use uavpos::agent::grid_oracle;
use uavpos::config::load_scenario;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = load_scenario(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/scenario_b.json"))?;
    for resolution in [5.0, 2.5] {
        let r = grid_oracle(&scenario, &scenario.env, resolution)?;
        println!(
            "{resolution} m lattice: {} points, best {} reward {:.4} nLoS {} utilization {:.3}",
            r.evaluated, r.position, r.reward, r.report.n_los, r.report.utilization
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
