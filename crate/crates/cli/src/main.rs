mod diagnose;
mod error;
mod manifest;
mod plots;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use bottleneck_lab::ApmMode;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "bottleneck-lab", version, about = "Flow line simulation and bottleneck diagnosis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate scenarios and write event logs and metric CSVs.
    Run(RunArgs),
    /// Diagnose bottlenecks from an event log CSV.
    Diagnose(DiagnoseArgs),
    /// Write plot-ready CSVs from a results directory.
    ExportPlots(PlotArgs),
    /// Print the built-in scenario catalog as a config file.
    Catalog,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Elapsed,
    Retrospective,
}

impl From<Mode> for ApmMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Elapsed => ApmMode::Elapsed,
            Mode::Retrospective => ApmMode::Retrospective,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Scenario config file (TOML). Defaults to the built-in catalog.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scenario to run; repeatable.
    #[arg(long, required_unless_present = "all", conflicts_with = "all")]
    scenario: Vec<String>,
    /// Run every scenario in the config.
    #[arg(long)]
    all: bool,
    #[arg(long, env = "BOTTLENECK_LAB_SEED", default_value_t = 42)]
    seed: u64,
    /// Replications per scenario, overriding the config.
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Override the active period mode of every scenario.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    /// Event log with columns run_id,station_id,state,start,end.
    eventlog: PathBuf,
    #[arg(long, default_value = "diagnosis")]
    out: PathBuf,
    /// Time before the first sample instant.
    #[arg(long, default_value_t = 2_000.0)]
    settling: f64,
    #[arg(long, default_value_t = 1.0)]
    interval: f64,
    /// Number of sample instants; defaults to all that fit in the log.
    #[arg(long)]
    samples: Option<usize>,
    /// Value written to the `scenario` column.
    #[arg(long, default_value = "log")]
    label: String,
    #[arg(long, value_enum, default_value = "elapsed")]
    mode: Mode,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Directory written by `run`.
    results: PathBuf,
    /// Output directory; defaults to the results directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Severity window `start:end`, relative to the observation start.
    #[arg(long, default_value = "900:1100", value_parser = plots::parse_window)]
    window: (f64, f64),
    #[arg(long, default_value = "S3-1")]
    window_scenario: String,
    #[arg(long, default_value_t = 0)]
    window_run: usize,
    /// Stations in the window export, e.g. `3,4,5,6` or `all`.
    #[arg(long, default_value = "3,4,5,6", value_parser = plots::parse_stations)]
    stations: plots::StationFilter,
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => run::cmd_run(&args),
        Command::Diagnose(args) => diagnose::cmd_diagnose(&args),
        Command::ExportPlots(args) => plots::cmd_export_plots(&args),
        Command::Catalog => run::cmd_catalog(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
