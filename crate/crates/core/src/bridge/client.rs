use std::io::{BufReader, BufWriter};
use std::net::{TcpStream, ToSocketAddrs};

use crate::env::{Observation, StepResult};
use crate::error::WireError;

use super::wire::{read_frame, write_frame, Body, ObsField, WireMessage, PROTOCOL_VERSION};

/// Cached `spec` reply.
#[derive(Clone, Debug, PartialEq)]
pub struct RemoteSpec {
    pub version: u32,
    pub action_count: usize,
    pub actions: Vec<String>,
    pub observation: Vec<ObsField>,
    pub episode_steps: u64,
}

/// Minimal client for the environment server.
pub struct RemoteEnv {
    session: String,
    spec: RemoteSpec,
    reader: BufReader<TcpStream>,
    writer: BufWriter<TcpStream>,
}

impl RemoteEnv {
    pub fn connect(addr: impl ToSocketAddrs) -> Result<Self, WireError> {
        let stream = TcpStream::connect(addr)?;
        stream.set_nodelay(true)?;
        let mut reader = BufReader::new(stream.try_clone()?);
        let mut writer = BufWriter::new(stream);
        write_frame(
            &mut writer,
            &WireMessage::new(
                "",
                Body::Hello {
                    version: PROTOCOL_VERSION,
                },
            ),
        )?;
        let reply = read_frame(&mut reader)?
            .ok_or_else(|| WireError::Protocol("server closed during handshake".into()))?;
        match reply.body {
            Body::Spec {
                version,
                action_count,
                actions,
                observation,
                episode_steps,
            } => {
                if version != PROTOCOL_VERSION {
                    return Err(WireError::Protocol(format!(
                        "server speaks protocol {version}, client {PROTOCOL_VERSION}"
                    )));
                }
                Ok(Self {
                    session: reply.session,
                    spec: RemoteSpec {
                        version,
                        action_count,
                        actions,
                        observation,
                        episode_steps,
                    },
                    reader,
                    writer,
                })
            }
            Body::Error { message } => Err(WireError::Protocol(message)),
            other => Err(WireError::Protocol(format!(
                "expected spec, got {}",
                WireMessage::new("", other).kind()
            ))),
        }
    }

    pub fn session(&self) -> &str {
        &self.session
    }

    pub fn spec(&self) -> &RemoteSpec {
        &self.spec
    }

    /// Sends a raw message and returns the raw reply.
    pub fn request(&mut self, body: Body) -> Result<WireMessage, WireError> {
        write_frame(&mut self.writer, &WireMessage::new(&self.session, body))?;
        read_frame(&mut self.reader)?
            .ok_or_else(|| WireError::Protocol("server closed the session".into()))
    }

    pub fn reset(&mut self, seed: u64) -> Result<Observation, WireError> {
        match self.request(Body::Reset { seed })?.body {
            Body::Obs { observation } => Ok(observation),
            Body::Error { message } => Err(WireError::Protocol(message)),
            other => Err(unexpected(other)),
        }
    }

    pub fn step(&mut self, action: i64) -> Result<StepResult, WireError> {
        match self.request(Body::Act { action })?.body {
            Body::StepResult {
                observation,
                reward,
                done,
                info,
            } => Ok(StepResult {
                observation,
                reward,
                done,
                info,
            }),
            Body::Error { message } => Err(WireError::Protocol(message)),
            other => Err(unexpected(other)),
        }
    }

    pub fn close(mut self) -> Result<(), WireError> {
        match self.request(Body::Close)?.body {
            Body::Close => Ok(()),
            other => Err(unexpected(other)),
        }
    }
}

fn unexpected(body: Body) -> WireError {
    WireError::Protocol(format!("unexpected {} reply", WireMessage::new("", body).kind()))
}
