//! `secretary`: generate datasets, run sweeps, evaluate the analysis and build or
//! certify the hardness LP.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error,
//! 3 size budget exceeded.

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{Context as _, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use secretary_core::Error as CoreError;

mod analyze;
mod experiments;
mod lp;
mod svg;

#[derive(Parser, Debug)]
#[command(name = "secretary", version, about = "Secretary algorithms with predictions")]
struct Cli {
    /// Seed for dataset generation; overrides the sweep config's master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Directory for every file the command writes.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,

    /// JSON config: a sweep config, or a manifest written by an earlier sweep.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write synthetic datasets, one JSON file per dataset.
    Gen(experiments::GenArgs),
    /// Run algorithms over a grid of generators, k and epsilon.
    Sweep(experiments::SweepArgs),
    /// Evaluate the bounds, the parameter grid search and comparison curves.
    #[command(subcommand)]
    Analyze(analyze::AnalyzeCommand),
    /// Build, solve, export or certify the hardness LP.
    #[command(subcommand)]
    Lp(lp::LpCommand),
}

/// A bad flag or config; exits with code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Written next to the outputs of every command that produces files.
#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: &'static str,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub artifacts: Vec<String>,
    pub started_unix_secs: u64,
    pub wall_clock_secs: f64,
}

pub struct Context {
    pub seed: Option<u64>,
    pub out_dir: PathBuf,
    pub config: Option<PathBuf>,
    started: Instant,
    started_unix: u64,
    artifacts: Vec<String>,
}

impl Context {
    /// Writes `name` under the output directory and records it as an artifact.
    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.out_dir).with_context(|| format!("creating {}", self.out_dir.display()))?;
        let path = self.out_dir.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.artifacts.push(name.to_string());
        Ok(path)
    }

    pub fn read_config(&self) -> Result<Option<String>> {
        let Some(path) = &self.config else { return Ok(None) };
        std::fs::read_to_string(path)
            .map(Some)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))
    }

    pub fn finish(&mut self, command: &str, seed: Option<u64>, config: serde_json::Value) -> Result<()> {
        let manifest = RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION"),
            seed,
            config,
            artifacts: std::mem::take(&mut self.artifacts),
            started_unix_secs: self.started_unix,
            wall_clock_secs: self.started.elapsed().as_secs_f64(),
        };
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        let path = self.out_dir.join("manifest.json");
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

/// Shortest decimal form with at most `digits` fractional digits.
pub fn trim_float(x: f64, digits: usize) -> String {
    let s = format!("{x:.digits$}");
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" {
            "0".into()
        } else {
            t.into()
        }
    } else {
        s
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::BudgetExceeded(_)) => 3,
        Some(
            CoreError::InvalidParameter(_)
            | CoreError::InvalidInstance(_)
            | CoreError::Domain(_)
            | CoreError::Parse { .. }
            | CoreError::Json(_),
        ) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let mut ctx = Context {
        seed: cli.seed,
        out_dir: cli.out_dir,
        config: cli.config,
        started: Instant::now(),
        started_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        artifacts: Vec::new(),
    };
    match cli.command {
        Command::Gen(args) => experiments::gen(&mut ctx, &args),
        Command::Sweep(args) => experiments::sweep(&mut ctx, &args),
        Command::Analyze(cmd) => analyze::run(&mut ctx, &cmd),
        Command::Lp(cmd) => lp::run(&mut ctx, &cmd),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
