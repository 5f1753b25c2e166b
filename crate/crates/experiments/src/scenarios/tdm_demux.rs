//! Time-multiplexed source characterization: each time bin alone, the two
//! bins multiplexed, and the stream demultiplexed by the loop switch.
//!
//! Four tomography acquisitions run in a fixed order:
//! 1. `channel1`: the late interferometer arm is blocked, leaving the
//!    early bin's pair state at its bare rate.
//! 2. `channel2`: the early arm is blocked.
//! 3. `multiplexed`: both bins together, read without the switch. Because
//!    the bins carry different Bell states, the time-averaged state is
//!    their weighted mixture and its entangled fraction is bounded near
//!    the dominant bin's weight.
//! 4. `demultiplexed`: the switch window is timed onto the early bin, so
//!    the transmitted port recovers that bin's state (the late bin only
//!    leaks through at the extinction floor), at the cost of the window
//!    capture and the transmitted-port loss.
//!
//! Counts and reconstructed states go to per-case files; the metrics are
//! the model-level multiplexed entangled fraction plus the reconstructed
//! entangled fraction of every case.

use std::path::Path;

use nolm_core::quantum::fully_entangled_fraction;
use nolm_core::rng::child_rng;
use nolm_core::source::{demultiplex, michelson_pump, project_and_trace, sfwm_channels, tdm_stream};
use nolm_core::switch::transmission_window;
use nolm_core::source::SpatialMode;
use nolm_core::tomo::{standard_settings, write_count_records_file, NoiseParams};
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::{ExperimentError, Result};
use crate::summary::{MetricCheck, RunSummary};
use crate::targets;

use super::{tomography_case, write_state_json};

pub fn run(config: &ExperimentConfig, out_dir: &Path) -> Result<RunSummary> {
    let sweep = config.tdm_demux.clone().unwrap_or_default();
    if sweep.n_pulses_per_setting == 0 {
        return Err(ExperimentError::Config(
            "source tomography needs a positive pulse count per setting".into(),
        ));
    }
    let source = config.source.build()?;
    let full = tdm_stream(&source)?;
    if full.channels().len() != 2 {
        return Err(ExperimentError::Config(
            "the time-multiplexed source must carry exactly two bins".into(),
        ));
    }
    let bin_weights: Vec<f64> = full.channels().iter().map(|c| c.weight).collect();

    // Single-bin streams by blocking one interferometer arm.
    let mut single_bins = Vec::with_capacity(2);
    for blocked in [1usize, 0usize] {
        let mut pump = michelson_pump(&source)?;
        pump[blocked].amplitude = 0.0;
        single_bins.push(sfwm_channels(&pump, &source)?);
    }

    // Demultiplexed stream: window timed onto the early bin, grid extended
    // over the whole stream so the late bin sees the explicit floor.
    let cfg = config.switch.build_for_length(sweep.length_m)?;
    let window0 = transmission_window(&cfg)?;
    let centered = window0.shifted(sweep.demux_delay_ps - window0.profile().centroid()?);
    let (lo, hi) = full.support_ps();
    let window = centered.extended_to(lo, hi)?;
    let captures: Vec<f64> = full
        .channels()
        .iter()
        .map(|ch| ch.temporal_profile.overlap_with(|t| window.transmission_at(t)))
        .collect();
    let demuxed = demultiplex(&full, &window)?;
    let t_weight: f64 = demuxed
        .channels()
        .iter()
        .filter(|c| c.spatial_mode == SpatialMode::T)
        .map(|c| c.weight)
        .sum();
    let survival_t = cfg.survival(cfg.loss_transmit_db);

    // (label, model state, pair rate, signal-arm survival)
    let multiplexed_model = project_and_trace(&full, SpatialMode::T)?;
    let fef_model_multiplexed = fully_entangled_fraction(&multiplexed_model)?;
    let cases = [
        (
            "channel1",
            project_and_trace(&single_bins[0], SpatialMode::T)?,
            bin_weights[0],
            1.0,
        ),
        (
            "channel2",
            project_and_trace(&single_bins[1], SpatialMode::T)?,
            bin_weights[1],
            1.0,
        ),
        ("multiplexed", multiplexed_model, 1.0, 1.0),
        (
            "demultiplexed",
            project_and_trace(&demuxed, SpatialMode::T)?,
            t_weight,
            survival_t,
        ),
    ];

    let settings = standard_settings();
    let mut metrics = vec![MetricCheck::new(
        "fef_multiplexed_ideal",
        fef_model_multiplexed,
        targets::MULTIPLEXED_FEF_IDEAL,
    )];
    let mut case_details = Vec::new();
    for (index, (label, model, rate_fraction, survival)) in cases.into_iter().enumerate() {
        let prepared = config.noise.apply_state_noise(&model)?;
        let base_noise = config.noise.params(0.0)?;
        let noise = NoiseParams::new(
            base_noise.dark_prob_per_gate,
            base_noise.background_prob_per_gate,
            base_noise.efficiency_signal * survival,
            base_noise.efficiency_idler,
        )?;
        let pair_prob = source.pair_prob_per_pulse * rate_fraction;
        let mut rng = child_rng(config.seed, index as u64);
        let (records, result) = tomography_case(
            &prepared,
            sweep.n_pulses_per_setting,
            pair_prob,
            &noise,
            sweep.n_resamples as usize,
            &mut rng,
        )?;
        write_count_records_file(
            out_dir.join(format!("counts_{label}.csv")),
            &records,
            &settings,
        )?;
        write_state_json(&out_dir.join(format!("state_{label}.json")), &result)?;

        let target = match label {
            "channel1" | "channel2" => targets::SINGLE_CHANNEL_FEF,
            "multiplexed" => targets::MULTIPLEXED_FEF_NOISY,
            _ => targets::DEMULTIPLEXED_FEF,
        };
        metrics.push(MetricCheck::new(
            &format!("fef_{label}"),
            result.metrics.fidelity_max,
            target,
        ));
        case_details.push(json!({
            "label": label,
            "pair_prob_effective": pair_prob,
            "signal_survival": survival,
            "fef": result.metrics.fidelity_max,
            "fef_sigma": result.metric_uncertainties.fidelity_max,
            "tangle": result.metrics.tangle,
            "linear_entropy": result.metrics.linear_entropy,
        }));
    }

    let details = json!({
        "length_m": sweep.length_m,
        "demux_delay_ps": sweep.demux_delay_ps,
        "bin_weights": bin_weights,
        "bin_captures": captures,
        "transmitted_weight": t_weight,
        "transmitted_survival": survival_t,
        "fef_multiplexed_model": fef_model_multiplexed,
        "cases": case_details,
    });
    Ok(RunSummary::new(
        config.scenario.tag(),
        config.seed,
        metrics,
        details,
    ))
}
