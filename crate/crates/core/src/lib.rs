//! Obstacle-aware UAV positioning.
//!
//! A UAV carrying a Wi-Fi access point serves ground users in a venue with
//! box-shaped buildings. The crate provides line-of-sight geometry, path loss
//! and MCS selection, an airtime-sharing link layer (closed form and
//! discrete-event), an episodic environment, a reference DQN agent, an
//! exhaustive grid oracle, a multi-seed evaluation harness and a TCP bridge
//! for external agents.

pub mod agent;
pub mod bridge;
pub mod cli;
pub mod config;
pub mod env;
pub mod error;
pub mod geometry;
pub mod linkmac;
pub mod metrics;
pub mod radio;
