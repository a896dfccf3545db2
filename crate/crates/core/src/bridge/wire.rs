//! Length-prefixed JSON frames.
//!
//! A frame is a 4-byte big-endian payload length followed by a UTF-8 JSON
//! object. Every object carries `"type"` and `"session"`; other fields depend
//! on the type. Unknown fields are ignored.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::env::{Observation, StepInfo};
use crate::error::WireError;

pub const PROTOCOL_VERSION: u32 = 1;

/// Frames above this size are rejected before allocation.
pub const MAX_FRAME: usize = 16 * 1024 * 1024;

/// One observation component as advertised in the `spec` message.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObsField {
    pub name: String,
    pub low: f64,
    pub high: f64,
    pub unit: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Body {
    Hello {
        #[serde(default)]
        version: u32,
    },
    Spec {
        version: u32,
        action_count: usize,
        actions: Vec<String>,
        observation: Vec<ObsField>,
        episode_steps: u64,
    },
    Reset {
        #[serde(default)]
        seed: u64,
    },
    Obs {
        observation: Observation,
    },
    Act {
        action: i64,
    },
    StepResult {
        observation: Observation,
        reward: f64,
        done: bool,
        info: StepInfo,
    },
    Close,
    Error {
        message: String,
    },
}

const TYPES: [&str; 8] = [
    "hello",
    "spec",
    "reset",
    "obs",
    "act",
    "step_result",
    "close",
    "error",
];

#[derive(Clone, Debug, PartialEq)]
pub struct WireMessage {
    pub session: String,
    pub body: Body,
}

impl WireMessage {
    pub fn new(session: impl Into<String>, body: Body) -> Self {
        Self {
            session: session.into(),
            body,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.body {
            Body::Hello { .. } => "hello",
            Body::Spec { .. } => "spec",
            Body::Reset { .. } => "reset",
            Body::Obs { .. } => "obs",
            Body::Act { .. } => "act",
            Body::StepResult { .. } => "step_result",
            Body::Close => "close",
            Body::Error { .. } => "error",
        }
    }
}

fn payload(msg: &WireMessage) -> Vec<u8> {
    let mut value = serde_json::to_value(&msg.body).expect("wire body serializes");
    value
        .as_object_mut()
        .expect("tagged body is an object")
        .insert("session".into(), Value::String(msg.session.clone()));
    serde_json::to_vec(&value).expect("json value serializes")
}

pub fn encode(msg: &WireMessage) -> Vec<u8> {
    let body = payload(msg);
    let mut out = Vec::with_capacity(body.len() + 4);
    out.extend_from_slice(&(body.len() as u32).to_be_bytes());
    out.extend_from_slice(&body);
    out
}

fn decode_payload(bytes: &[u8]) -> Result<WireMessage, WireError> {
    let mut value: Value = serde_json::from_slice(bytes)
        .map_err(|e| WireError::Frame(format!("malformed payload: {e}")))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| WireError::Frame("payload is not an object".into()))?;
    let kind = obj
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| WireError::Protocol("missing message type".into()))?;
    if !TYPES.contains(&kind) {
        return Err(WireError::Protocol(format!("unknown message type {kind:?}")));
    }
    let session = match obj.remove("session") {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s,
        Some(other) => return Err(WireError::Protocol(format!("bad session id {other}"))),
    };
    let body: Body = serde_json::from_value(value)
        .map_err(|e| WireError::Protocol(format!("bad payload: {e}")))?;
    Ok(WireMessage { session, body })
}

/// Decodes exactly one frame.
pub fn decode(bytes: &[u8]) -> Result<WireMessage, WireError> {
    if bytes.len() < 4 {
        return Err(WireError::Frame(format!(
            "truncated length prefix ({} bytes)",
            bytes.len()
        )));
    }
    let len = u32::from_be_bytes(bytes[..4].try_into().unwrap()) as usize;
    let rest = &bytes[4..];
    if rest.len() < len {
        return Err(WireError::Frame(format!(
            "truncated frame: expected {len} bytes, got {}",
            rest.len()
        )));
    }
    if rest.len() > len {
        return Err(WireError::Frame(format!(
            "{} trailing bytes after frame",
            rest.len() - len
        )));
    }
    decode_payload(rest)
}

pub fn write_frame(w: &mut impl Write, msg: &WireMessage) -> Result<(), WireError> {
    w.write_all(&encode(msg))?;
    w.flush()?;
    Ok(())
}

/// Reads one frame. `Ok(None)` on a clean end of stream between frames.
pub fn read_frame(r: &mut impl Read) -> Result<Option<WireMessage>, WireError> {
    let mut prefix = [0u8; 4];
    let mut got = 0;
    while got < 4 {
        match r.read(&mut prefix[got..])? {
            0 if got == 0 => return Ok(None),
            0 => return Err(WireError::Frame("stream ended inside length prefix".into())),
            n => got += n,
        }
    }
    let len = u32::from_be_bytes(prefix) as usize;
    if len > MAX_FRAME {
        return Err(WireError::Frame(format!("frame of {len} bytes exceeds limit")));
    }
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => WireError::Frame("stream ended inside frame".into()),
        _ => WireError::Io(e),
    })?;
    decode_payload(&buf).map(Some)
}
