//! Command-line front end: one subcommand per scenario.
//!
//! Exit codes: 0 when every metric meets its target, 2 when the run
//! completed but at least one metric missed, 1 on configuration or
//! execution errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nolm_experiments::{run_scenario, ExperimentConfig, ExperimentError, Scenario};

#[derive(Debug, Parser)]
#[command(
    name = "nolm-sim",
    version,
    about = "Deterministic simulator of a fiber-loop single-photon switch bench",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Switching contrast versus pump energy, classical and single-photon
    Contrast(RunArgs),
    /// Switching-window traces and width extraction
    Window(RunArgs),
    /// Scattering background versus loop length and gate width
    Background(RunArgs),
    /// Entangled-state tomography through the driven and undriven switch
    SwitchTomo(RunArgs),
    /// Per-color nonlinear phase versus amplifier drive
    SepColors(RunArgs),
    /// Time-multiplexed source: channels, multiplexed, demultiplexed
    TdmDemux(RunArgs),
    /// Demultiplexer eye diagram versus drive delay
    Eye(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Configuration file (JSON); defaults to the stock calibration
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override the random seed
    #[arg(long)]
    seed: Option<u64>,

    /// Override the output directory
    #[arg(long)]
    out: Option<PathBuf>,

    /// Suppress the verdict table
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (scenario, args) = match cli.command {
        Command::Contrast(a) => (Scenario::Contrast, a),
        Command::Window(a) => (Scenario::Window, a),
        Command::Background(a) => (Scenario::Background, a),
        Command::SwitchTomo(a) => (Scenario::SwitchTomo, a),
        Command::SepColors(a) => (Scenario::SepColors, a),
        Command::TdmDemux(a) => (Scenario::TdmDemux, a),
        Command::Eye(a) => (Scenario::Eye, a),
    };
    match execute(scenario, &args) {
        Ok(summary) => {
            if !args.quiet {
                print!("{}", summary.render_table());
                eprintln!(
                    "{} finished in {:.2} s ({})",
                    summary.scenario,
                    summary.wall_time.as_secs_f64(),
                    if summary.all_pass {
                        "all targets met"
                    } else {
                        "targets missed"
                    }
                );
            }
            if summary.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn execute(
    scenario: Scenario,
    args: &RunArgs,
) -> Result<nolm_experiments::RunSummary, ExperimentError> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => ExperimentConfig::default_for(scenario),
    };
    if config.scenario != scenario {
        return Err(ExperimentError::Config(format!(
            "config file is for scenario {}, but the {} subcommand was run",
            config.scenario.tag(),
            scenario.tag()
        )));
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = &args.out {
        config.output_dir = Some(out.clone());
    }
    run_scenario(&config)
}
