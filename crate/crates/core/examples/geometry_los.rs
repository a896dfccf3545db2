// Line-of-sight between a UAV and the users of the obstacle scenario.

use uavpos::config::load_scenario;
use uavpos::geometry::{count_los, has_los, segment_intersects_box, Building, Position3};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let block = Building::new(40.0, 60.0, 40.0, 60.0, 15.0);
    let through = segment_intersects_box(
        &Position3::new(0.0, 0.0, 10.0),
        &Position3::new(100.0, 100.0, 10.0),
        &block,
    );
    let over = segment_intersects_box(
        &Position3::new(0.0, 0.0, 20.0),
        &Position3::new(100.0, 100.0, 20.0),
        &block,
    );
    let roof = segment_intersects_box(
        &Position3::new(0.0, 50.0, 15.0),
        &Position3::new(100.0, 50.0, 15.0),
        &block,
    );
    println!("diagonal at 10 m blocked: {through}; at 20 m: {over}; along the roof: {roof}");
    assert!(through && !over && !roof);

    let scenario = load_scenario(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/scenario_b.json"))?;
    let ues = scenario.ue_positions();
    for c in &scenario.candidate_positions {
        let visible: Vec<bool> = ues
            .iter()
            .map(|u| has_los(&c.position, u, &scenario.buildings))
            .collect();
        println!(
            "{:<10} {}  nLoS {}  {:?}",
            c.label,
            c.position,
            count_los(&c.position, &ues, &scenario.buildings),
            visible
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
