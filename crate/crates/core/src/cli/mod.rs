//! Batch experiment runner behind the `jitterchan` binary.
//!
//! A run is described by a flat `key = value` config file:
//!
//! ```text
//! # comments start with '#'
//! experiment    = rs-ser-sweep          # or given on the command line
//! snr_db        = 14:2:30               # list: comma separated, start:step:stop
//! sigma_j       = 0.2
//! block_symbols = 255, 511, 1023
//! rate          = 0.8
//! detectors     = lln
//! trials        = 100000
//! seed          = 1
//! ```
//!
//! List-valued keys expand to their Cartesian product. Unknown keys are an
//! error. `preset = fig5` starts from a stored figure configuration and
//! lets the remaining keys override it.
//!
//! Output is a CSV whose leading `#` lines record the tool version and the
//! fully resolved config; feeding that CSV back as `--config` reproduces it
//! byte for byte. The thread count is deliberately not recorded because it
//! never changes the output.

mod config;
mod experiments;
mod presets;
mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use crate::{Error, Result};

pub use config::{Diagnostic, ExperimentConfig, ExperimentKind, NoiseGrid, Severity};
pub use experiments::columns;
pub use presets::Preset;
pub use table::{render_csv, write_atomic, CsvData, Table};

/// Every violated precondition of `cfg`, errors and warnings alike.
pub fn validate(cfg: &ExperimentConfig) -> Vec<Diagnostic> {
    cfg.validate()
}

fn check(cfg: &ExperimentConfig) -> Result<()> {
    let errors: Vec<String> = validate(cfg)
        .iter()
        .filter(|d| d.is_error())
        .map(|d| d.to_string())
        .collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(Error::Config(errors.join("; ")))
    }
}

/// Computes the experiment's table.
pub fn run(cfg: &ExperimentConfig) -> Result<Table> {
    check(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
    pool.install(|| experiments::compute(cfg))
}

/// Runs the experiment and writes the complete CSV to `path`. Nothing is
/// written if the run fails.
pub fn run_to_file(cfg: &ExperimentConfig, path: &Path) -> Result<()> {
    let table = run(cfg)?;
    write_atomic(path, &render_csv(cfg, &table))
}

/// Reads a config (or a CSV produced by this tool) from disk.
pub fn load_config(path: &Path, requested: Option<ExperimentKind>) -> Result<ExperimentConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    ExperimentConfig::parse(&text, requested)
}

/// Command-line arguments of the `jitterchan` binary.
#[derive(Debug, Parser)]
#[command(
    name = "jitterchan",
    version,
    about = "Global-jitter probe-storage channel experiments"
)]
pub struct Args {
    /// ber-sweep, rs-ser-sweep, capacity-curve, rcb-curve, fano-curve,
    /// floor-report or figure-preset.
    #[arg(value_parser = parse_kind)]
    pub experiment: ExperimentKind,
    /// Config file, or a CSV previously written by this tool.
    #[arg(long)]
    pub config: PathBuf,
    /// Master seed; overrides the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores). Does not change the output.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Multiplier on the config's trial count; overrides the config.
    #[arg(long)]
    pub trials_scale: Option<f64>,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
    /// Validate the config, print diagnostics and exit.
    #[arg(long)]
    pub check: bool,
}

fn parse_kind(s: &str) -> std::result::Result<ExperimentKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Args {
    /// The config file with command-line overrides applied.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = load_config(&self.config, Some(self.experiment))?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(scale) = self.trials_scale {
            cfg.trials_scale = scale;
        }
        cfg.threads = self.threads.unwrap_or(0);
        cfg.out = Some(self.out.clone());
        Ok(cfg)
    }
}

/// Exit codes: 0 success, 1 run failure, 2 invalid config.
pub fn main_with_args(args: &Args) -> ExitCode {
    let cfg = match args.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let diagnostics = validate(&cfg);
    for d in &diagnostics {
        eprintln!("{d}");
    }
    if diagnostics.iter().any(Diagnostic::is_error) {
        return ExitCode::from(2);
    }
    if args.check {
        return ExitCode::SUCCESS;
    }
    match run_to_file(&cfg, &args.out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
