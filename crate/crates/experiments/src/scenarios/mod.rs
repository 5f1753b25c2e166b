//! One module per experiment scenario, plus shared helpers.
//!
//! Every scenario has the same shape: `run(&config, out_dir)` sweeps the
//! model, writes the raw curves or counts as CSV (and reconstructed states
//! as JSON) under `out_dir`, and returns a [`RunSummary`] whose metrics
//! carry the scenario's scientific verdicts. Randomness is drawn from
//! per-case child seeds (`child_rng(config.seed, case_index)`), so cases
//! are reproducible independently of sweep order.

pub mod background;
pub mod contrast;
pub mod eye;
pub mod sep_colors;
pub mod switch_tomo;
pub mod tdm_demux;
pub mod window;

use std::path::Path;

use nolm_core::rng::SimRng;
use nolm_core::tomo::{
    simulate_counts, standard_settings, uncertainties_mc, CountRecord, NoiseParams,
    ReconstructionResult,
};
use nolm_core::quantum::DensityMatrix;
use serde_json::json;

use crate::error::Result;
use crate::output;

/// Render a fiber length for file names: integral lengths lose the
/// decimal point ("100"), fractional ones keep it ("2.5").
pub(crate) fn format_length(length_m: f64) -> String {
    if length_m.fract() == 0.0 {
        format!("{}", length_m as i64)
    } else {
        format!("{length_m}")
    }
}

/// One full tomography acquisition and reconstruction on the standard
/// 36-setting grid: simulate counts, fit the state, bootstrap the metric
/// uncertainties (skipped when `n_resamples` is zero).
pub(crate) fn tomography_case(
    rho: &DensityMatrix,
    n_pulses: u64,
    pair_prob: f64,
    noise: &NoiseParams,
    n_resamples: usize,
    rng: &mut SimRng,
) -> Result<(Vec<CountRecord>, ReconstructionResult)> {
    let settings = standard_settings();
    let records = simulate_counts(rho, &settings, n_pulses, pair_prob, noise, rng)?;
    let result = uncertainties_mc(&records, &settings, n_resamples, rng)?;
    Ok((records, result))
}

/// Write a reconstructed state with its entanglement metrics as JSON.
pub(crate) fn write_state_json(path: &Path, result: &ReconstructionResult) -> Result<()> {
    let dim = result.rho.dim();
    let entry = |i: usize, j: usize| result.rho.entry(i, j);
    let re: Vec<Vec<f64>> = (0..dim)
        .map(|i| (0..dim).map(|j| entry(i, j).re).collect())
        .collect();
    let im: Vec<Vec<f64>> = (0..dim)
        .map(|i| (0..dim).map(|j| entry(i, j).im).collect())
        .collect();
    let value = json!({
        "schema_version": crate::summary::SCHEMA_VERSION,
        "dim": dim,
        "rho_re": re,
        "rho_im": im,
        "metrics": {
            "fidelity_max": result.metrics.fidelity_max,
            "tangle": result.metrics.tangle,
            "linear_entropy": result.metrics.linear_entropy,
        },
        "uncertainties": {
            "fidelity_max": result.metric_uncertainties.fidelity_max,
            "tangle": result.metric_uncertainties.tangle,
            "linear_entropy": result.metric_uncertainties.linear_entropy,
        },
        "n_resamples": result.n_resamples,
        "normalization": result.normalization,
        "objective_value": result.objective_value,
    });
    output::write_json(path, &value)
}
