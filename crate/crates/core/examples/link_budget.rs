// Path loss, SNR and MCS for each user at a few candidate positions.

use uavpos::config::load_scenario;
use uavpos::linkmac::analytic_evaluate;
use uavpos::radio::{friis_loss, RadioConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let radio = RadioConfig::default();
    println!("Friis loss at 100 m, 5.25 GHz: {:.2} dB", friis_loss(100.0, &radio)?);

    let scenario = load_scenario(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/scenario_b.json"))?;
    for c in scenario.candidate_positions.iter().take(2) {
        let report = analytic_evaluate(&scenario, &c.position)?;
        println!("{} at {}", c.label, c.position);
        for (ue, link) in scenario.ues.iter().zip(&report.links) {
            println!(
                "  ue{} los={:<5} loss {:6.1} dB  snr {:6.1} dB  mcs {:?}",
                ue.id, link.los, link.loss, link.snr, link.mcs
            );
        }
        println!(
            "  utilization {:.3}  throughput {:.1} Mbit/s  feasible {}",
            report.utilization, report.aggregate_throughput, report.feasible
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
