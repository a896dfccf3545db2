//! Network access to the environment so agents written in any language can
//! drive `reset`/`step` over a TCP stream. See `docs/protocol.md`.

mod client;
mod server;
pub mod wire;

pub use client::{RemoteEnv, RemoteSpec};
pub use server::{handle_connection, observation_schema, serve, spec_body, Server};
pub use wire::{decode, encode, read_frame, write_frame, Body, ObsField, WireMessage};
