//! `gamma-ratio`: evaluate the gamma-function ratio f and its logarithmic
//! derivatives, sweep its inequalities over random configurations, run
//! complete-monotonicity grid checks, reconstruct the representing density
//! of [ln f]″, and search for counterexamples to the sharpness floor.
//!
//! A run is described by a [`config::RunConfig`], assembled from an optional
//! `--config` JSON file with command-line flags layered on top. Exit codes:
//! 0 clean, 1 usage or runtime failure, 2 asserted contract violated (a
//! replay config pinning the violating instance is written next to the
//! report).

mod config;
mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{CommandKind, OutputFormat, RunConfig};
use run::CliError;

#[derive(Parser)]
#[command(
    name = "gamma-ratio",
    version,
    about = "Gamma-ratio evaluation, inequality sweeps, and monotonicity checks",
    propagate_version = true
)]
struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<CommandArgs>,
}

#[derive(Subcommand)]
enum CommandArgs {
    /// Evaluate ln f and its first two log-derivatives over a t-grid.
    Eval(CommonFlags),
    /// Sweep the two-sided bound on f2 over random matrices and scales.
    IneqCheck(CommonFlags),
    /// Grid-check complete monotonicity of [ln f]'' (and, at rho = 2,
    /// the Bernstein property of [ln f]').
    CmCheck(CommonFlags),
    /// Multi-start search for sharpness ratios below the floor 2.
    Sharpness(CommonFlags),
    /// Tabulate the representing density of [ln f]'' and its Levy factor.
    Measure(CommonFlags),
    /// Sweep the multinomial product form, beta identity, and
    /// convex-combination inequality.
    CombiCheck(CommonFlags),
}

impl CommandArgs {
    fn kind(&self) -> CommandKind {
        match self {
            CommandArgs::Eval(_) => CommandKind::Eval,
            CommandArgs::IneqCheck(_) => CommandKind::IneqCheck,
            CommandArgs::CmCheck(_) => CommandKind::CmCheck,
            CommandArgs::Sharpness(_) => CommandKind::Sharpness,
            CommandArgs::Measure(_) => CommandKind::Measure,
            CommandArgs::CombiCheck(_) => CommandKind::CombiCheck,
        }
    }

    fn flags(&self) -> &CommonFlags {
        match self {
            CommandArgs::Eval(f)
            | CommandArgs::IneqCheck(f)
            | CommandArgs::CmCheck(f)
            | CommandArgs::Sharpness(f)
            | CommandArgs::Measure(f)
            | CommandArgs::CombiCheck(f) => f,
        }
    }
}

#[derive(Args)]
struct CommonFlags {
    /// Explicit matrix entries as JSON rows, e.g. '[[1,1],[2,3]]'.
    #[arg(long, value_name = "JSON", conflicts_with = "dims")]
    matrix: Option<String>,
    /// Shape of a seeded random matrix (entries log-uniform in [1e-3, 1e3]).
    #[arg(long, num_args = 2, value_names = ["M", "N"])]
    dims: Option<Vec<usize>>,
    /// Exponent on the denominator product; the theorems live at rho <= 2.
    #[arg(long)]
    rho: Option<f64>,
    /// Sweep sample count (or search start count for `sharpness`).
    #[arg(long)]
    samples: Option<u64>,
    /// Base seed; all randomness derives from it deterministically.
    #[arg(long)]
    seed: Option<u64>,
    /// Index of the first sample, for replaying part of a sweep.
    #[arg(long)]
    first_sample: Option<u64>,
    /// Geometric t-grid as T_MIN T_MAX POINTS.
    #[arg(long, num_args = 3, value_names = ["T_MIN", "T_MAX", "POINTS"])]
    grid: Option<Vec<f64>>,
    /// Grid lower endpoint (overrides --grid).
    #[arg(long)]
    t_min: Option<f64>,
    /// Grid upper endpoint (overrides --grid).
    #[arg(long)]
    t_max: Option<f64>,
    /// Grid point count (overrides --grid).
    #[arg(long)]
    points: Option<usize>,
    /// Highest derivative order for grid checks (1..=6).
    #[arg(long)]
    order: Option<usize>,
    /// Report format; defaults to CSV for sweeps, JSON for checks.
    #[arg(long, value_enum)]
    output_format: Option<OutputFormat>,
    /// Report file; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    output_path: Option<PathBuf>,
}

impl CommonFlags {
    /// Layers these flags over `cfg`. Only flags the user passed change
    /// anything, so a `--config` file supplies every unmentioned field.
    fn apply(&self, cfg: &mut RunConfig) -> Result<(), String> {
        if let Some(raw) = &self.matrix {
            let rows: Vec<Vec<f64>> = serde_json::from_str(raw)
                .map_err(|e| format!("--matrix expects JSON rows like [[1,2],[3,4]]: {e}"))?;
            cfg.matrix = Some(rows);
            cfg.dims = None;
        }
        if let Some(dims) = &self.dims {
            cfg.dims = Some((dims[0], dims[1]));
            cfg.matrix = None;
        }
        if let Some(rho) = self.rho {
            cfg.rho = rho;
        }
        if let Some(samples) = self.samples {
            cfg.samples = samples;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(first) = self.first_sample {
            cfg.first_sample = first;
        }
        if let Some(grid) = &self.grid {
            cfg.grid.t_min = grid[0];
            cfg.grid.t_max = grid[1];
            let points = grid[2];
            if points.fract() != 0.0 || points < 0.0 || points > usize::MAX as f64 {
                return Err(format!("--grid POINTS must be a nonnegative integer, got {points}"));
            }
            cfg.grid.points = points as usize;
        }
        if let Some(t_min) = self.t_min {
            cfg.grid.t_min = t_min;
        }
        if let Some(t_max) = self.t_max {
            cfg.grid.t_max = t_max;
        }
        if let Some(points) = self.points {
            cfg.grid.points = points;
        }
        if let Some(order) = self.order {
            cfg.order = order;
        }
        if let Some(format) = self.output_format {
            cfg.output_format = Some(format);
        }
        if let Some(path) = &self.output_path {
            cfg.output_path = Some(path.clone());
        }
        Ok(())
    }
}

/// Assembles the effective run config: `--config` file as the base (or
/// command defaults), then flag overrides.
fn build_config(cli: &Cli) -> Result<RunConfig, String> {
    let file_cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("read {}: {e}", path.display()))?;
            let cfg: RunConfig = serde_json::from_str(&text)
                .map_err(|e| format!("parse {}: {e}", path.display()))?;
            Some(cfg)
        }
        None => None,
    };
    let mut cfg = match (file_cfg, &cli.command) {
        (Some(cfg), _) => cfg,
        (None, Some(command)) => RunConfig::new(command.kind()),
        (None, None) => return Err("pass a command or --config FILE (see --help)".to_string()),
    };
    if let Some(command) = &cli.command {
        cfg.command = command.kind();
        command.flags().apply(&mut cfg)?;
    }
    Ok(cfg)
}

/// Where the replay config for a contract violation goes: next to the
/// report when one was requested, the working directory otherwise.
fn violation_path(cfg: &RunConfig) -> PathBuf {
    match &cfg.output_path {
        Some(path) => path.with_extension("violation.json"),
        None => PathBuf::from("violation.json"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(message) => {
            eprintln!("gamma-ratio: {message}");
            return ExitCode::from(1);
        }
    };
    match run::execute(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) | Err(CliError::Runtime(message)) => {
            eprintln!("gamma-ratio: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Contract { message, replay }) => {
            let path = violation_path(&cfg);
            match serde_json::to_string_pretty(&replay) {
                Ok(mut text) => {
                    text.push('\n');
                    match std::fs::write(&path, text) {
                        Ok(()) => eprintln!(
                            "gamma-ratio: contract violated: {message}; replay config written to {}",
                            path.display()
                        ),
                        Err(e) => eprintln!(
                            "gamma-ratio: contract violated: {message}; failed to write {}: {e}",
                            path.display()
                        ),
                    }
                }
                Err(e) => eprintln!(
                    "gamma-ratio: contract violated: {message}; failed to serialize replay: {e}"
                ),
            }
            ExitCode::from(2)
        }
    }
}
