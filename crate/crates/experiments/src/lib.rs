//! Scenario runner for the loop-switch simulator.
//!
//! A run is described by an [`ExperimentConfig`] (scenario tag, seed,
//! bench settings, optional sweep overrides). [`run_scenario`] validates
//! it, executes the scenario into the configured output directory, and
//! writes `summary.json` last — so a directory containing a summary is a
//! complete run. All output is deterministic: the same config and seed
//! reproduce every file byte for byte.

pub mod config;
pub mod error;
pub mod output;
pub mod scenarios;
pub mod summary;
pub mod targets;

pub use config::{ExperimentConfig, Scenario};
pub use error::{ExperimentError, Result};
pub use summary::{MetricCheck, RunSummary, TargetSpec};

/// Run one scenario end to end and return its summary (also written to
/// `summary.json` in the output directory).
pub fn run_scenario(config: &ExperimentConfig) -> Result<RunSummary> {
    config.validate()?;
    let out_dir = config.output_dir.clone().ok_or_else(|| {
        ExperimentError::Config(
            "no output directory configured; set output_dir in the config \
             or pass one on the command line"
                .into(),
        )
    })?;
    std::fs::create_dir_all(&out_dir)?;
    let started = std::time::Instant::now();
    let mut summary = match config.scenario {
        Scenario::Contrast => scenarios::contrast::run(config, &out_dir),
        Scenario::Window => scenarios::window::run(config, &out_dir),
        Scenario::Background => scenarios::background::run(config, &out_dir),
        Scenario::SwitchTomo => scenarios::switch_tomo::run(config, &out_dir),
        Scenario::SepColors => scenarios::sep_colors::run(config, &out_dir),
        Scenario::TdmDemux => scenarios::tdm_demux::run(config, &out_dir),
        Scenario::Eye => scenarios::eye::run(config, &out_dir),
    }?;
    summary.wall_time = started.elapsed();
    output::write_json(&out_dir.join("summary.json"), &summary)?;
    Ok(summary)
}
