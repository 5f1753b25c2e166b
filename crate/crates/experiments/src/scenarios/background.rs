//! In-loop scattering background: rate versus loop length and versus
//! coincidence-gate width.
//!
//! Two sweeps, two CSVs. Each point carries the expected probability per
//! pulse (the model value the fits run on) and a Poisson-sampled count at
//! the configured pulse number (the texture a bench would record). The
//! fitted slopes are the headline metrics: per meter of fiber for the
//! ungated sweep, per picosecond of gate for the gated sweep at a fixed
//! long loop. Gate points past the length-limited saturation are excluded
//! from the gated fit.

use std::path::Path;

use nolm_core::rng::child_rng;
use nolm_core::switch::{raman_counts, raman_expected_per_pulse};
use serde::Serialize;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::{ExperimentError, Result};
use crate::output;
use crate::summary::{MetricCheck, RunSummary};
use crate::targets;

#[derive(Debug, Serialize)]
struct LengthRow {
    length_m: f64,
    expected_prob_per_pulse: f64,
    n_pulses: u64,
    sampled_counts: u64,
}

#[derive(Debug, Serialize)]
struct GateRow {
    gate_ps: f64,
    length_m: f64,
    expected_prob_per_pulse: f64,
    n_pulses: u64,
    sampled_counts: u64,
}

/// Least-squares slope of y against x (with intercept).
fn fitted_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(ExperimentError::Config(
            "slope fit needs at least two sweep points".into(),
        ));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(ExperimentError::Config(
            "slope fit needs at least two distinct sweep points".into(),
        ));
    }
    Ok(sxy / sxx)
}

pub fn run(config: &ExperimentConfig, out_dir: &Path) -> Result<RunSummary> {
    let sweep = config.background.clone().unwrap_or_default();
    if sweep.n_pulses == 0 {
        return Err(ExperimentError::Config(
            "background sweep needs a positive pulse count".into(),
        ));
    }

    let mut length_rows = Vec::with_capacity(sweep.lengths_m.len());
    for (i, &length_m) in sweep.lengths_m.iter().enumerate() {
        let cfg = config.switch.build_for_length(length_m)?;
        let expected = raman_expected_per_pulse(&cfg, None)?;
        let mut rng = child_rng(config.seed, i as u64);
        let sampled = raman_counts(expected, sweep.n_pulses, &mut rng)?;
        length_rows.push(LengthRow {
            length_m,
            expected_prob_per_pulse: expected,
            n_pulses: sweep.n_pulses,
            sampled_counts: sampled,
        });
    }
    output::write_csv(&out_dir.join("background_vs_length.csv"), &length_rows)?;

    let gate_cfg = config.switch.build_for_length(sweep.gate_length_m)?;
    let saturation = raman_expected_per_pulse(&gate_cfg, None)?;
    let mut gate_rows = Vec::with_capacity(sweep.gate_widths_ps.len());
    for (i, &gate_ps) in sweep.gate_widths_ps.iter().enumerate() {
        let expected = raman_expected_per_pulse(&gate_cfg, Some(gate_ps))?;
        let mut rng = child_rng(config.seed, 1000 + i as u64);
        let sampled = raman_counts(expected, sweep.n_pulses, &mut rng)?;
        gate_rows.push(GateRow {
            gate_ps,
            length_m: sweep.gate_length_m,
            expected_prob_per_pulse: expected,
            n_pulses: sweep.n_pulses,
            sampled_counts: sampled,
        });
    }
    output::write_csv(&out_dir.join("background_vs_gate.csv"), &gate_rows)?;

    let length_points: Vec<(f64, f64)> = length_rows
        .iter()
        .map(|r| (r.length_m, r.expected_prob_per_pulse))
        .collect();
    let gate_points: Vec<(f64, f64)> = gate_rows
        .iter()
        .filter(|r| r.expected_prob_per_pulse < saturation)
        .map(|r| (r.gate_ps, r.expected_prob_per_pulse))
        .collect();

    let metrics = vec![
        MetricCheck::new(
            "background_slope_per_m",
            fitted_slope(&length_points)?,
            targets::RAMAN_SLOPE_PER_M,
        ),
        MetricCheck::new(
            "gated_background_slope_per_ps",
            fitted_slope(&gate_points)?,
            targets::RAMAN_GATED_PER_PS,
        ),
    ];
    let details = json!({
        "gate_length_m": sweep.gate_length_m,
        "gate_saturation_prob": saturation,
        "n_gate_points_in_fit": gate_points.len(),
        "n_length_points_in_fit": length_points.len(),
    });
    Ok(RunSummary::new(
        config.scenario.tag(),
        config.seed,
        metrics,
        details,
    ))
}
