use std::io::{BufReader, BufWriter};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;

use crate::config::ScenarioConfig;
use crate::env::{Action, EnvConfig, UavEnv};
use crate::error::{EnvError, WireError};

use super::wire::{read_frame, write_frame, Body, ObsField, WireMessage, PROTOCOL_VERSION};

/// Observation schema advertised to clients.
pub fn observation_schema(scenario: &ScenarioConfig) -> Vec<ObsField> {
    let field = |name: &str, low: f64, high: f64, unit: &str| ObsField {
        name: name.into(),
        low,
        high,
        unit: unit.into(),
    };
    let z = &scenario.zone;
    vec![
        field("x", z.x.min, z.x.max, "m"),
        field("y", z.y.min, z.y.max, "m"),
        field("z", z.z.min, z.z.max, "m"),
        field("x_norm", 0.0, 1.0, "1"),
        field("y_norm", 0.0, 1.0, "1"),
        field("z_norm", 0.0, 1.0, "1"),
        field("n_los", 0.0, scenario.ues.len() as f64, "count"),
    ]
}

pub fn spec_body(env: &UavEnv) -> Body {
    Body::Spec {
        version: PROTOCOL_VERSION,
        action_count: Action::COUNT,
        actions: Action::ALL.iter().map(|a| a.name().to_string()).collect(),
        observation: observation_schema(env.scenario()),
        episode_steps: env.episode_steps(),
    }
}

/// Environment server: one session and one environment per connection.
pub struct Server {
    listener: TcpListener,
    scenario: Arc<ScenarioConfig>,
    cfg: EnvConfig,
    sessions: Arc<AtomicU64>,
}

impl Server {
    pub fn bind(
        endpoint: impl ToSocketAddrs,
        scenario: Arc<ScenarioConfig>,
        cfg: EnvConfig,
    ) -> std::io::Result<Self> {
        // Fail early on a bad env block rather than per connection.
        UavEnv::with_config(Arc::clone(&scenario), cfg)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e.to_string()))?;
        Ok(Self {
            listener: TcpListener::bind(endpoint)?,
            scenario,
            cfg,
            sessions: Arc::new(AtomicU64::new(0)),
        })
    }

    pub fn local_addr(&self) -> std::io::Result<SocketAddr> {
        self.listener.local_addr()
    }

    /// Accepts connections until the listener fails.
    pub fn run(self) -> std::io::Result<()> {
        for stream in self.listener.incoming() {
            let stream = stream?;
            let scenario = Arc::clone(&self.scenario);
            let cfg = self.cfg;
            let id = self.sessions.fetch_add(1, Ordering::Relaxed) + 1;
            std::thread::spawn(move || {
                let peer = stream.peer_addr().ok();
                if let Err(e) = handle_connection(stream, scenario, cfg, format!("s{id}")) {
                    log::warn!("session s{id} ({peer:?}) ended with error: {e}");
                }
            });
        }
        Ok(())
    }

    /// Runs the accept loop on a background thread.
    pub fn spawn(self) -> JoinHandle<std::io::Result<()>> {
        std::thread::spawn(move || self.run())
    }
}

/// Binds `endpoint` and serves until the process exits.
pub fn serve(endpoint: &str, scenario: Arc<ScenarioConfig>, cfg: EnvConfig) -> std::io::Result<()> {
    let server = Server::bind(endpoint, scenario, cfg)?;
    log::info!("listening on {}", server.local_addr()?);
    server.run()
}

fn reply_error(
    w: &mut impl std::io::Write,
    session: &str,
    message: impl Into<String>,
) -> Result<(), WireError> {
    write_frame(
        w,
        &WireMessage::new(
            session,
            Body::Error {
                message: message.into(),
            },
        ),
    )
}

/// Drives one session. Protocol violations get an `error` reply and end the
/// session; the environment only moves on `reset` and `act`.
pub fn handle_connection(
    stream: TcpStream,
    scenario: Arc<ScenarioConfig>,
    cfg: EnvConfig,
    session: String,
) -> Result<(), WireError> {
    stream.set_nodelay(true)?;
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut writer = BufWriter::new(stream);
    let mut env = UavEnv::with_config(scenario, cfg).map_err(|e| WireError::Protocol(e.to_string()))?;

    match read_frame(&mut reader) {
        Ok(Some(WireMessage {
            body: Body::Hello { .. },
            ..
        })) => {
            write_frame(&mut writer, &WireMessage::new(&session, spec_body(&env)))?;
        }
        Ok(Some(other)) => {
            reply_error(&mut writer, &session, format!("expected hello, got {}", other.kind()))?;
            return Err(WireError::Protocol("session did not start with hello".into()));
        }
        Ok(None) => return Ok(()),
        Err(e) => {
            reply_error(&mut writer, &session, e.to_string())?;
            return Err(e);
        }
    }

    let mut reset_done = false;
    loop {
        let msg = match read_frame(&mut reader) {
            Ok(Some(m)) => m,
            Ok(None) => return Ok(()),
            Err(e) => {
                reply_error(&mut writer, &session, e.to_string())?;
                return Err(e);
            }
        };
        match msg.body {
            Body::Reset { seed } => {
                let observation = env
                    .reset(seed)
                    .map_err(|e| WireError::Protocol(e.to_string()))?;
                reset_done = true;
                write_frame(&mut writer, &WireMessage::new(&session, Body::Obs { observation }))?;
            }
            Body::Act { action } => {
                if !reset_done {
                    reply_error(&mut writer, &session, "act before reset")?;
                    return Err(WireError::Protocol("act before reset".into()));
                }
                let action = match Action::from_code(action) {
                    Ok(a) => a,
                    Err(_) => {
                        reply_error(&mut writer, &session, "action out of range")?;
                        return Err(WireError::Protocol(format!("action {action} out of range")));
                    }
                };
                match env.step(action) {
                    Ok(r) => write_frame(
                        &mut writer,
                        &WireMessage::new(
                            &session,
                            Body::StepResult {
                                observation: r.observation,
                                reward: r.reward,
                                done: r.done,
                                info: r.info,
                            },
                        ),
                    )?,
                    // Recoverable: the client may reset and continue.
                    Err(e @ EnvError::EpisodeFinished) => {
                        reply_error(&mut writer, &session, e.to_string())?
                    }
                    Err(e) => {
                        reply_error(&mut writer, &session, e.to_string())?;
                        return Err(WireError::Protocol(e.to_string()));
                    }
                }
            }
            Body::Close => {
                write_frame(&mut writer, &WireMessage::new(&session, Body::Close))?;
                return Ok(());
            }
            other => {
                let kind = WireMessage::new("", other).kind();
                reply_error(&mut writer, &session, format!("unexpected {kind} message"))?;
                return Err(WireError::Protocol(format!("unexpected {kind}")));
            }
        }
    }
}
