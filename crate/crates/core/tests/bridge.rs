use std::io::Write;
use std::net::{SocketAddr, TcpStream};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use uavpos::bridge::{decode, encode, read_frame, write_frame, Body, RemoteEnv, Server, WireMessage};
use uavpos::config::{load_scenario, ScenarioConfig};
use uavpos::env::{Action, UavEnv};

fn scenario() -> Arc<ScenarioConfig> {
    Arc::new(
        load_scenario(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/scenario_b.json")).unwrap(),
    )
}

fn start_server(scenario: &Arc<ScenarioConfig>) -> SocketAddr {
    let server = Server::bind("127.0.0.1:0", Arc::clone(scenario), scenario.env).unwrap();
    let addr = server.local_addr().unwrap();
    server.spawn();
    addr
}

#[test]
fn remote_episodes_match_local_ones() {
    let scenario = scenario();
    let addr = start_server(&scenario);
    let mut remote = RemoteEnv::connect(addr).unwrap();
    let mut local = UavEnv::new(Arc::clone(&scenario)).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let steps = local.episode_steps() as usize;
    for seed in 0..100u64 {
        let len = rng.random_range(1..=steps);
        let actions: Vec<i64> = (0..len).map(|_| rng.random_range(0..Action::COUNT as i64)).collect();
        assert_eq!(remote.reset(seed).unwrap(), local.reset(seed).unwrap());
        for &a in &actions {
            assert_eq!(remote.step(a).unwrap(), local.step_code(a).unwrap());
        }
    }
    remote.close().unwrap();
}

#[test]
fn handshake_advertises_spec() {
    let scenario = scenario();
    let remote = RemoteEnv::connect(start_server(&scenario)).unwrap();
    let spec = remote.spec();
    assert_eq!(spec.action_count, 7);
    assert_eq!(spec.actions.len(), 7);
    assert_eq!(spec.observation.len(), 7);
    assert_eq!(spec.episode_steps, scenario.env.episode_steps());
    assert!(remote.session().starts_with('s'));
}

#[test]
fn act_before_reset_is_an_error() {
    let scenario = scenario();
    let mut remote = RemoteEnv::connect(start_server(&scenario)).unwrap();
    let err = remote.step(0).unwrap_err();
    assert!(err.to_string().contains("act before reset"), "{err}");
}

#[test]
fn out_of_range_action_is_an_error() {
    let scenario = scenario();
    let mut remote = RemoteEnv::connect(start_server(&scenario)).unwrap();
    remote.reset(1).unwrap();
    let err = remote.step(9).unwrap_err();
    assert!(err.to_string().contains("action out of range"), "{err}");
}

#[test]
fn finished_episode_can_be_reset() {
    let scenario = scenario();
    let mut remote = RemoteEnv::connect(start_server(&scenario)).unwrap();
    remote.reset(1).unwrap();
    for _ in 0..scenario.env.episode_steps() {
        remote.step(6).unwrap();
    }
    assert!(remote.step(6).is_err());
    remote.reset(2).unwrap();
    assert!(!remote.step(6).unwrap().done);
}

#[test]
fn malformed_frame_gets_error_reply() {
    let scenario = scenario();
    let mut stream = TcpStream::connect(start_server(&scenario)).unwrap();
    write_frame(&mut stream, &WireMessage::new("", Body::Hello { version: 1 })).unwrap();
    let spec = read_frame(&mut stream).unwrap().unwrap();
    assert_eq!(spec.kind(), "spec");

    let junk = b"{not json";
    stream.write_all(&(junk.len() as u32).to_be_bytes()).unwrap();
    stream.write_all(junk).unwrap();
    let reply = read_frame(&mut stream).unwrap().unwrap();
    assert!(matches!(reply.body, Body::Error { .. }));
    assert!(read_frame(&mut stream).unwrap().is_none());
}

#[test]
fn documented_act_frame_matches_encoding() {
    let msg = WireMessage::new("s1", Body::Act { action: 2 });
    let bytes = encode(&msg);
    let payload = br#"{"action":2,"session":"s1","type":"act"}"#;
    assert_eq!(&bytes[..4], &(payload.len() as u32).to_be_bytes());
    assert_eq!(&bytes[4..], payload);
    assert_eq!(decode(&bytes).unwrap(), msg);
}
