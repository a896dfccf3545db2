use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uavpos::agent::{argmax, ReplayBuffer, Transition};
use uavpos::config::ScenarioConfig;
use uavpos::env::compute_reward;
use uavpos::geometry::{
    clamp_to_zone, count_los, segment_intersects_box, ActionZone, Building, Interval, Position3,
};
use uavpos::linkmac::{analytic_evaluate, des_run, DesOptions};
use uavpos::metrics::distribution;
use uavpos::radio::{default_mcs_table, friis_loss, select_mcs, RadioConfig};

fn point() -> impl Strategy<Value = Position3> {
    (0.0..100.0, 0.0..100.0, 0.0..40.0).prop_map(|(x, y, z)| Position3::new(x, y, z))
}

fn building() -> impl Strategy<Value = Building> {
    (0.0..90.0, 0.0..90.0, 1.0..30.0, 1.0..30.0, 1.0..35.0)
        .prop_map(|(x, y, w, d, h)| Building::new(x, x + w, y, y + d, h))
}

fn zone() -> ActionZone {
    ActionZone {
        x: Interval { min: 0.0, max: 100.0 },
        y: Interval { min: 0.0, max: 100.0 },
        z: Interval { min: 2.0, max: 60.0 },
    }
}

/// Free-space scenario with one UE per demand, spread along a line.
fn line_scenario(demands: &[f64]) -> ScenarioConfig {
    let ues: Vec<String> = demands
        .iter()
        .enumerate()
        .map(|(i, d)| {
            format!(
                r#"{{"id":{i},"position":{{"x":{},"y":40,"z":1.5}},"demand":{d}}}"#,
                30.0 + 8.0 * i as f64
            )
        })
        .collect();
    ScenarioConfig::from_json_str(&format!(
        r#"{{"venue":{{"width":100,"depth":100}},"ues":[{}],
            "zone":{{"x":{{"min":0,"max":100}},"y":{{"min":0,"max":100}},"z":{{"min":1,"max":60}}}},
            "initial_position":"venue_center_z10"}}"#,
        ues.join(",")
    ))
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn segment_test_is_symmetric(p0 in point(), p1 in point(), b in building()) {
        prop_assert_eq!(segment_intersects_box(&p0, &p1, &b), segment_intersects_box(&p1, &p0, &b));
    }

    #[test]
    fn clamp_is_idempotent(p in (-50.0..150.0, -50.0..150.0, -10.0..90.0), prev in point(), bs in prop::collection::vec(building(), 0..4)) {
        let z = zone();
        let prev = z.clamp(&prev);
        prop_assume!(!bs.iter().any(|b| b.contains_interior(&prev)));
        let proposed = Position3::new(p.0, p.1, p.2);
        let once = clamp_to_zone(&proposed, &prev, &z, &bs);
        prop_assert!(z.contains(&once));
        prop_assert_eq!(clamp_to_zone(&once, &prev, &z, &bs), once);
    }

    #[test]
    fn adding_buildings_never_adds_los(uav in point(), ues in prop::collection::vec(point(), 1..8), bs in prop::collection::vec(building(), 0..5), extra in building()) {
        let before = count_los(&uav, &ues, &bs);
        let mut more = bs.clone();
        more.push(extra);
        prop_assert!(count_los(&uav, &ues, &more) <= before);
    }

    #[test]
    fn mcs_selection_is_monotone(a in -20.0..50.0f64, b in -20.0..50.0f64) {
        let table = default_mcs_table();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let rate = |s| select_mcs(s, &table).map_or(0.0, |m| m.phy_rate);
        prop_assert!(rate(lo) <= rate(hi));
    }

    #[test]
    fn friis_gains_20_db_per_decade(d in 1.0..1000.0f64, k in 1.0..100.0f64) {
        let cfg = RadioConfig::default();
        let gap = friis_loss(d * k, &cfg).unwrap() - friis_loss(d, &cfg).unwrap();
        prop_assert!((gap - 20.0 * k.log10()).abs() < 1e-9);
    }

    #[test]
    fn reward_is_bounded_and_monotone(n in 1usize..40, n_los in 0usize..40, total in 1.0..1000.0f64, thr in 0.0..2000.0f64, w1 in 0.0..=1.0f64) {
        let n_los = n_los.min(n);
        let w2 = 1.0 - w1;
        let r = compute_reward(n_los, n, thr, total, w1, w2);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&r));
        if n_los < n {
            prop_assert!(compute_reward(n_los + 1, n, thr, total, w1, w2) >= r);
        }
        prop_assert!(compute_reward(n_los, n, thr + 1.0, total, w1, w2) >= r);
    }

    #[test]
    fn replay_keeps_newest_items(capacity in 1usize..50, pushes in 0usize..200) {
        let mut buf = ReplayBuffer::new(capacity);
        for i in 0..pushes {
            buf.push(Transition { obs: vec![i as f64], action: 0, reward: 0.0, next_obs: vec![], done: false });
        }
        prop_assert_eq!(buf.len(), pushes.min(capacity));
        let kept: Vec<usize> = buf.iter().map(|t| t.obs[0] as usize).collect();
        let want: Vec<usize> = (pushes.saturating_sub(capacity)..pushes).collect();
        prop_assert_eq!(kept, want);
    }

    #[test]
    fn greedy_choice_ignores_positive_scaling(q in prop::collection::vec(-10.0..10.0f64, 1..10), k in 0.01..100.0f64) {
        let scaled: Vec<f64> = q.iter().map(|v| v * k).collect();
        prop_assert_eq!(argmax(&q), argmax(&scaled));
    }

    #[test]
    fn cdf_and_ccdf_sum_to_one(samples in prop::collection::vec(0.0..10.0f64, 1..100)) {
        let points = distribution(&samples).unwrap();
        prop_assert!(points.windows(2).all(|w| w[0].value < w[1].value && w[0].cdf < w[1].cdf));
        for p in &points {
            prop_assert!((p.cdf + p.ccdf - 1.0).abs() < 1e-12);
        }
        prop_assert_eq!(points.last().unwrap().cdf, 1.0);
    }

    #[test]
    fn analytic_delay_grows_with_load(base in prop::collection::vec(1.0..40.0f64, 1..5), k in 1.0..3.0f64) {
        let uav = Position3::new(40.0, 45.0, 10.0);
        let light = analytic_evaluate(&line_scenario(&base), &uav).unwrap();
        let heavy_demands: Vec<f64> = base.iter().map(|d| d * k).collect();
        let heavy = analytic_evaluate(&line_scenario(&heavy_demands), &uav).unwrap();
        prop_assert!(heavy.utilization >= light.utilization);
        prop_assert!(heavy.mean_delay >= light.mean_delay);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn des_never_carries_more_than_offered(demands in prop::collection::vec(1.0..150.0f64, 1..5), seed in 0u64..1000, z in 2.0..40.0f64) {
        let scenario = line_scenario(&demands);
        let duration = 1.0;
        let report = des_run(&scenario, &Position3::new(40.0, 45.0, z), duration, seed, DesOptions::default()).unwrap();
        // At most one packet per flow beyond the nominal rate can arrive in the window.
        let slack = demands.len() as f64 * scenario.mac.packet_bits() / (duration * 1e6);
        prop_assert!(report.aggregate_throughput <= demands.iter().sum::<f64>() + slack);
        prop_assert!((report.carried.iter().sum::<f64>() - report.aggregate_throughput).abs() < 1e-9);
    }
}

#[test]
fn replay_sampling_is_seeded() {
    let mut buf = ReplayBuffer::new(10);
    for i in 0..10 {
        buf.push(Transition { obs: vec![i as f64], action: 0, reward: 0.0, next_obs: vec![], done: false });
    }
    let draw = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        buf.sample(5, &mut rng).iter().map(|t| t.obs[0]).collect::<Vec<_>>()
    };
    assert_eq!(draw(3), draw(3));
}
