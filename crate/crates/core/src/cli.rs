//! Command-line entry points shared by the `uavpos` binary and tests.

use std::error::Error;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::agent::{displaced_positions, evaluate_position, grid_oracle, train};
use crate::config::{load_scenario, CandidatePosition, LogLevel, ScenarioConfig};
use crate::env::UavEnv;
use crate::geometry::Position3;
use crate::metrics::{export_metrics, RunManifest};

pub type CliResult<T> = Result<T, Box<dyn Error + Send + Sync>>;

#[derive(Debug, Parser)]
#[command(name = "uavpos", version, about = "Obstacle-aware UAV positioning simulator")]
pub struct Cli {
    /// Overrides the scenario's log level (error, warning, info, debug).
    #[arg(long, global = true)]
    pub log_level: Option<LogLevel>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train the reference DQN agent.
    Train(TrainArgs),
    /// Packet-level evaluation of one position over several seeds.
    Eval(EvalArgs),
    /// Exhaustive lattice search for the best position.
    Oracle(OracleArgs),
    /// Serve the environment over TCP.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: u64,
    /// Overrides `train.episodes`.
    #[arg(long)]
    pub episodes: Option<u32>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// `x,y,z`, `oracle` or `baseline`.
    #[arg(long, allow_hyphen_values = true)]
    pub position: PositionArg,
    /// `a..b` (inclusive) or a comma-separated list.
    #[arg(long, default_value = "1..30")]
    pub seeds: SeedList,
    #[arg(long, default_value_t = 100.0)]
    pub duration: f64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Also evaluate the five positions displaced by 10 m.
    #[arg(long)]
    pub displaced: bool,
    /// Lattice spacing used when `--position oracle`.
    #[arg(long, default_value_t = 2.5)]
    pub resolution: f64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 2.5)]
    pub resolution: f64,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = "127.0.0.1:5555")]
    pub listen: String,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PositionArg {
    Explicit(Position3),
    Oracle,
    Baseline,
}

impl std::str::FromStr for PositionArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "oracle" => Ok(PositionArg::Oracle),
            "baseline" => Ok(PositionArg::Baseline),
            _ => {
                let parts: Vec<f64> = s
                    .split(',')
                    .map(|p| p.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| format!("bad position {s:?}: {e}"))?;
                match parts[..] {
                    [x, y, z] if x.is_finite() && y.is_finite() && z.is_finite() => {
                        Ok(PositionArg::Explicit(Position3::new(x, y, z)))
                    }
                    _ => Err(format!("position {s:?} needs three finite numbers")),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedList(pub Vec<u64>);

impl std::str::FromStr for SeedList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |e: std::num::ParseIntError| format!("bad seed list {s:?}: {e}");
        let seeds: Vec<u64> = if let Some((a, b)) = s.split_once("..") {
            let a: u64 = a.trim().parse().map_err(bad)?;
            let b: u64 = b.trim().trim_start_matches('=').parse().map_err(bad)?;
            if a > b {
                return Err(format!("empty seed range {s:?}"));
            }
            (a..=b).collect()
        } else {
            s.split(',')
                .map(|p| p.trim().parse::<u64>())
                .collect::<Result<_, _>>()
                .map_err(bad)?
        };
        if seeds.is_empty() {
            return Err("no seeds given".into());
        }
        Ok(SeedList(seeds))
    }
}

fn init_logging(level: LogLevel) {
    // A second init (tests call `run` repeatedly) is harmless.
    let _ = env_logger::Builder::new()
        .filter_level(level.to_filter())
        .format_timestamp(None)
        .try_init();
    log::set_max_level(level.to_filter());
}

fn load(path: &Path, cli_level: Option<LogLevel>) -> CliResult<ScenarioConfig> {
    let scenario = load_scenario(path)?;
    init_logging(cli_level.unwrap_or(scenario.log_level));
    Ok(scenario)
}

fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(())
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Train(a) => run_train(&a, cli.log_level),
        Command::Eval(a) => run_eval(&a, cli.log_level),
        Command::Oracle(a) => run_oracle(&a, cli.log_level),
        Command::Serve(a) => run_serve(&a, cli.log_level),
    }
}

pub const RETURNS_FILE: &str = "returns.csv";
pub const CHECKPOINT_FILE: &str = "policy.json";

/// Writes `returns.csv` (one row per training episode) and `policy.json`
/// (network weights plus best visited position).
pub fn run_train(args: &TrainArgs, level: Option<LogLevel>) -> CliResult<()> {
    let scenario = load(&args.config, level)?;
    let mut cfg = scenario.train.clone();
    if let Some(n) = args.episodes {
        cfg.episodes = n;
    }
    cfg.validate()
        .map_err(|(f, m)| format!("train.{f}: {m}"))?;
    let mut env = UavEnv::new(Arc::new(scenario))?;
    let outcome = train(&mut env, &cfg, args.seed)?;

    create_dir(&args.out)?;
    let mut csv = String::from("episode,return\n");
    for (i, r) in outcome.episode_returns.iter().enumerate() {
        writeln!(csv, "{},{r}", i + 1)?;
    }
    write_file(&args.out.join(RETURNS_FILE), &csv)?;
    write_file(
        &args.out.join(CHECKPOINT_FILE),
        &(serde_json::to_string_pretty(&outcome)? + "\n"),
    )?;
    println!(
        "trained {} episodes ({} steps); best position {} reward {:.6}",
        cfg.episodes, outcome.total_steps, outcome.best_position, outcome.best_reward
    );
    Ok(())
}

fn resolve_position(
    scenario: &ScenarioConfig,
    arg: PositionArg,
    resolution: f64,
) -> CliResult<CandidatePosition> {
    Ok(match arg {
        PositionArg::Explicit(p) => CandidatePosition {
            label: "position".into(),
            position: p,
        },
        PositionArg::Baseline => CandidatePosition {
            label: "baseline".into(),
            position: scenario.initial_position()?,
        },
        PositionArg::Oracle => {
            if resolution.is_nan() || resolution <= 0.0 {
                return Err("--resolution must be positive".into());
            }
            CandidatePosition {
                label: "oracle".into(),
                position: grid_oracle(scenario, &scenario.env, resolution)?.position,
            }
        }
    })
}

/// Writes one `value,cdf,ccdf` file per position and metric plus
/// `manifest.json`.
pub fn run_eval(args: &EvalArgs, level: Option<LogLevel>) -> CliResult<()> {
    if !(args.duration > 0.0 && args.duration.is_finite()) {
        return Err("--duration must be positive".into());
    }
    let scenario = load(&args.config, level)?;
    let main = resolve_position(&scenario, args.position, args.resolution)?;
    let mut positions = vec![main.clone()];
    if args.displaced {
        positions.extend(displaced_positions(&scenario, &main.position, 10.0));
    }

    let seeds = &args.seeds.0;
    let mut series = Vec::with_capacity(positions.len() * 2);
    for c in &positions {
        let ev = evaluate_position(&scenario, &c.label, &c.position, seeds, args.duration)?;
        println!(
            "{:<10} {}  median throughput {:.3} Mbit/s  median delay {:.6e} s",
            c.label,
            c.position,
            ev.throughput.median().unwrap_or(f64::NAN),
            ev.delay.median().unwrap_or(f64::NAN)
        );
        series.push(ev.throughput);
        series.push(ev.delay);
    }
    let manifest = RunManifest::new(
        args.config.display().to_string(),
        seeds.clone(),
        args.duration,
        positions,
    );
    export_metrics(&series, &manifest, &args.out)?;
    Ok(())
}

pub fn run_oracle(args: &OracleArgs, level: Option<LogLevel>) -> CliResult<()> {
    if args.resolution.is_nan() || args.resolution <= 0.0 {
        return Err("--resolution must be positive".into());
    }
    let scenario = load(&args.config, level)?;
    let result = grid_oracle(&scenario, &scenario.env, args.resolution)?;
    println!("{}", serde_json::to_string_pretty(&result)?);
    Ok(())
}

pub fn run_serve(args: &ServeArgs, level: Option<LogLevel>) -> CliResult<()> {
    let scenario = load(&args.config, level)?;
    let cfg = scenario.env;
    crate::bridge::serve(&args.listen, Arc::new(scenario), cfg)?;
    Ok(())
}
