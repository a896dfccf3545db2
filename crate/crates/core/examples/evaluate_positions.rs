// Oracle, baseline and displaced positions over several seeds, exported as
// CDF/CCDF files.

use uavpos::agent::{displaced_positions, evaluate_position, grid_oracle};
use uavpos::config::{load_scenario, CandidatePosition};
use uavpos::metrics::{export_metrics, RunManifest};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/scenario_b.json");
    let scenario = load_scenario(path)?;
    let oracle = grid_oracle(&scenario, &scenario.env, 2.5)?.position;

    let mut positions = vec![
        CandidatePosition { label: "oracle".into(), position: oracle },
        CandidatePosition { label: "baseline".into(), position: scenario.initial_position()? },
    ];
    positions.extend(displaced_positions(&scenario, &oracle, 10.0));

    let seeds: Vec<u64> = (1..=5).collect();
    let duration = 10.0;
    let mut series = Vec::new();
    for c in &positions {
        let ev = evaluate_position(&scenario, &c.label, &c.position, &seeds, duration)?;
        println!(
            "{:<10} {}  median {:7.2} Mbit/s  median delay {:.3e} s",
            c.label,
            c.position,
            ev.throughput.median().unwrap_or(f64::NAN),
            ev.delay.median().unwrap_or(f64::NAN)
        );
        series.push(ev.throughput);
        series.push(ev.delay);
    }
    let out = std::env::temp_dir().join("uavpos-evaluate-positions");
    let files = export_metrics(&series, &RunManifest::new(path, seeds, duration, positions), &out)?;
    println!("wrote {} files to {}", files.len(), out.display());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
