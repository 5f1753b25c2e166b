//! Demultiplexer eye diagram: switched-port coincidences versus the global
//! drive delay, one time bin blocked at a time.
//!
//! The switch window slides across the two-bin stream; at each delay the
//! transmitted-port coincidence count is Poisson-sampled for each bin
//! separately (the other arm blocked, as on the bench). The eye opening
//! is the contiguous delay span where the target bin is essentially fully
//! captured and the other bin is still suppressed to the leakage floor;
//! its midpoint is the operating delay. Because the bins are identical
//! translates of each other, the second bin's curve must be the first's
//! shifted by the bin spacing — checked via curve centroids and an L1
//! mismatch after shifting.

use std::path::Path;

use nolm_core::rng::child_rng;
use nolm_core::source::tdm_stream;
// Poisson counts for a per-pulse probability; not scattering-specific.
use nolm_core::switch::raman_counts as poisson_counts;
use nolm_core::switch::transmission_window;
use serde::Serialize;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::{ExperimentError, Result};
use crate::output;
use crate::summary::{MetricCheck, RunSummary};
use crate::targets;

/// The target bin counts as open above this fraction of its own peak.
const OPEN_FRACTION: f64 = 0.95;
/// The other bin counts as suppressed below this fraction of its own peak.
const SUPPRESSED_FRACTION: f64 = 0.05;

#[derive(Debug, Serialize)]
struct EyeRow {
    global_delay_ps: f64,
    coincidences_ch1: u64,
    coincidences_ch2: u64,
}

/// Baseline-subtracted centroid over the points at or above half max,
/// which reads the curve's center without the leakage-floor mass far
/// from the bin.
fn peak_centroid(delays: &[f64], counts: &[u64]) -> Result<f64> {
    let floor = *counts.iter().min().expect("curve is non-empty") as f64;
    let max = *counts.iter().max().expect("curve is non-empty") as f64;
    if max <= floor {
        return Err(ExperimentError::Config(
            "eye curve is flat; widen the delay sweep".into(),
        ));
    }
    let threshold = floor + 0.5 * (max - floor);
    let mut mass = 0.0;
    let mut moment = 0.0;
    for (&d, &c) in delays.iter().zip(counts) {
        let c = c as f64;
        if c >= threshold {
            mass += c - floor;
            moment += (c - floor) * d;
        }
    }
    Ok(moment / mass)
}

pub fn run(config: &ExperimentConfig, out_dir: &Path) -> Result<RunSummary> {
    let sweep = config.eye.clone().unwrap_or_default();
    if !(sweep.delay_step_ps > 0.0 && sweep.delay_max_ps > sweep.delay_min_ps) {
        return Err(ExperimentError::Config(
            "eye sweep needs a positive step and a non-empty delay range".into(),
        ));
    }
    if sweep.n_pulses_per_point == 0 {
        return Err(ExperimentError::Config(
            "eye sweep needs a positive pulse count per point".into(),
        ));
    }
    let source = config.source.build()?;
    let stream = tdm_stream(&source)?;
    if stream.channels().len() != 2 {
        return Err(ExperimentError::Config(
            "the eye diagram needs exactly two time bins".into(),
        ));
    }
    let bin_spacing = stream.channels()[1].t_center_ps - stream.channels()[0].t_center_ps;
    let shift_steps = bin_spacing / sweep.delay_step_ps;
    if (shift_steps - shift_steps.round()).abs() > 1e-9 {
        return Err(ExperimentError::Config(format!(
            "delay step {} ps must divide the bin spacing {} ps so the \
             translate check can align the curves",
            sweep.delay_step_ps, bin_spacing
        )));
    }
    let shift_steps = shift_steps.round() as usize;

    let cfg = config.switch.build_for_length(sweep.length_m)?;
    let window0 = transmission_window(&cfg)?;
    let window_center = window0.profile().centroid()?;
    let survival_t = cfg.survival(cfg.loss_transmit_db);
    let noise = config.noise.params(0.0)?;
    let per_pair = noise.efficiency_signal * survival_t * noise.efficiency_idler;

    let n = ((sweep.delay_max_ps - sweep.delay_min_ps) / sweep.delay_step_ps).round() as usize;
    let delays: Vec<f64> = (0..=n)
        .map(|i| sweep.delay_min_ps + i as f64 * sweep.delay_step_ps)
        .collect();
    let mut rows = Vec::with_capacity(delays.len());
    for (i, &delay) in delays.iter().enumerate() {
        let window = window0.shifted(delay - window_center);
        let mut rng = child_rng(config.seed, i as u64);
        let mut counts = [0u64; 2];
        for (slot, ch) in stream.channels().iter().enumerate() {
            let capture = ch
                .temporal_profile
                .overlap_with(|t| window.transmission_at(t));
            let expected = source.pair_prob_per_pulse * ch.weight * capture * per_pair;
            counts[slot] = poisson_counts(expected, sweep.n_pulses_per_point, &mut rng)?;
        }
        rows.push(EyeRow {
            global_delay_ps: delay,
            coincidences_ch1: counts[0],
            coincidences_ch2: counts[1],
        });
    }
    output::write_csv(&out_dir.join("eye_curves.csv"), &rows)?;

    let ch1: Vec<u64> = rows.iter().map(|r| r.coincidences_ch1).collect();
    let ch2: Vec<u64> = rows.iter().map(|r| r.coincidences_ch2).collect();
    let max1 = *ch1.iter().max().expect("sweep is non-empty") as f64;
    let max2 = *ch2.iter().max().expect("sweep is non-empty") as f64;
    if max1 == 0.0 || max2 == 0.0 {
        return Err(ExperimentError::Config(
            "eye sweep never captures one of the bins; widen the delay range".into(),
        ));
    }

    // Eye opening: contiguous run of open-and-suppressed points around the
    // channel-1 peak.
    let ok: Vec<bool> = ch1
        .iter()
        .zip(&ch2)
        .map(|(&c1, &c2)| {
            c1 as f64 >= OPEN_FRACTION * max1 && (c2 as f64) <= SUPPRESSED_FRACTION * max2
        })
        .collect();
    let argmax1 = ch1
        .iter()
        .enumerate()
        .max_by_key(|(_, &c)| c)
        .map(|(i, _)| i)
        .expect("sweep is non-empty");
    if !ok[argmax1] {
        return Err(ExperimentError::Config(
            "no eye opening: the delay sweep never captures one bin while \
             suppressing the other"
                .into(),
        ));
    }
    let mut first = argmax1;
    while first > 0 && ok[first - 1] {
        first -= 1;
    }
    let mut last = argmax1;
    while last + 1 < ok.len() && ok[last + 1] {
        last += 1;
    }
    let optimal_delay = 0.5 * (delays[first] + delays[last]);

    // Suppression at the operating point (nearest scanned delay).
    let at = ((optimal_delay - sweep.delay_min_ps) / sweep.delay_step_ps).round() as usize;
    let suppression = ch1[at] as f64 / (ch2[at] as f64).max(1.0);

    // Translate checks: centroid spacing and L1 mismatch of the curves
    // after shifting channel 2 back by the bin spacing.
    let spacing = peak_centroid(&delays, &ch2)? - peak_centroid(&delays, &ch1)?;
    let floor1 = *ch1.iter().min().expect("sweep is non-empty") as f64;
    let floor2 = *ch2.iter().min().expect("sweep is non-empty") as f64;
    let overlap = ch1.len() - shift_steps;
    let a: Vec<f64> = ch1[..overlap].iter().map(|&c| c as f64 - floor1).collect();
    let b: Vec<f64> = ch2[shift_steps..]
        .iter()
        .map(|&c| c as f64 - floor2)
        .collect();
    let (mass_a, mass_b) = (a.iter().sum::<f64>(), b.iter().sum::<f64>());
    if mass_a <= 0.0 || mass_b <= 0.0 {
        return Err(ExperimentError::Config(
            "eye curves carry no mass in the overlap region; widen the sweep".into(),
        ));
    }
    let mismatch: f64 = a
        .iter()
        .zip(&b)
        .map(|(&x, &y)| (x / mass_a - y / mass_b).abs())
        .sum();

    let metrics = vec![
        MetricCheck::new(
            "eye_optimal_delay_ps",
            optimal_delay,
            targets::EYE_OPTIMAL_DELAY_PS,
        ),
        MetricCheck::new(
            "eye_channel_spacing_ps",
            spacing,
            targets::EYE_CHANNEL_SPACING_PS,
        ),
        MetricCheck::new(
            "eye_translate_mismatch",
            mismatch,
            targets::EYE_TRANSLATE_MISMATCH,
        ),
        MetricCheck::new(
            "eye_suppression_ratio",
            suppression,
            targets::EYE_SUPPRESSION_RATIO,
        ),
    ];
    let details = json!({
        "length_m": sweep.length_m,
        "opening_first_ps": delays[first],
        "opening_last_ps": delays[last],
        "bin_spacing_ps": bin_spacing,
        "max_counts_ch1": max1,
        "max_counts_ch2": max2,
        "open_fraction": OPEN_FRACTION,
        "suppressed_fraction": SUPPRESSED_FRACTION,
    });
    Ok(RunSummary::new(
        config.scenario.tag(),
        config.seed,
        metrics,
        details,
    ))
}
