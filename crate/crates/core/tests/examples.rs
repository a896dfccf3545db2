mod bridge_loopback_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/bridge_loopback.rs"
    ));
}

#[test]
fn bridge_loopback_example_runs() {
    bridge_loopback_example::run_example().expect("bridge_loopback example should run");
}

mod des_queue_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/des_queue.rs"
    ));
}

#[test]
fn des_queue_example_runs() {
    des_queue_example::run_example().expect("des_queue example should run");
}

mod env_episode_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/env_episode.rs"
    ));
}

#[test]
fn env_episode_example_runs() {
    env_episode_example::run_example().expect("env_episode example should run");
}

mod evaluate_positions_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/evaluate_positions.rs"
    ));
}

#[test]
fn evaluate_positions_example_runs() {
    evaluate_positions_example::run_example().expect("evaluate_positions example should run");
}

mod geometry_los_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/geometry_los.rs"
    ));
}

#[test]
fn geometry_los_example_runs() {
    geometry_los_example::run_example().expect("geometry_los example should run");
}

mod grid_oracle_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/grid_oracle.rs"
    ));
}

#[test]
fn grid_oracle_example_runs() {
    grid_oracle_example::run_example().expect("grid_oracle example should run");
}

mod link_budget_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/link_budget.rs"
    ));
}

#[test]
fn link_budget_example_runs() {
    link_budget_example::run_example().expect("link_budget example should run");
}

mod train_dqn_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/train_dqn.rs"
    ));
}

#[test]
fn train_dqn_example_runs() {
    train_dqn_example::run_example().expect("train_dqn example should run");
}
