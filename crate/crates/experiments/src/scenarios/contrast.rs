//! Switching-contrast energy sweeps.
//!
//! For each loop length the pump energy is swept and the probe capture
//! computed twice: once for a classical probe (response linear in the
//! window) and once for single photons from a pair source (response
//! quadratic in the probe envelope, with an uncorrelated background per
//! port). Every curve goes to its own CSV; the headline metrics are the
//! peak contrasts, the energy at the classical peak, and the pump-off
//! leakage floor.

use std::path::Path;

use nolm_core::switch::{classical_probe, contrast, transmission_window};
use serde::Serialize;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::{ExperimentError, Result};
use crate::output;
use crate::summary::{MetricCheck, RunSummary};
use crate::targets;

use super::format_length;

#[derive(Debug, Serialize)]
struct ContrastRow {
    pump_energy_nj: f64,
    p_transmit: f64,
    p_reflect: f64,
    contrast: f64,
}

struct Curve {
    kind: &'static str,
    length_m: f64,
    peak_energy_nj: f64,
    peak_contrast: f64,
    pump_off_contrast: Option<f64>,
}

pub fn run(config: &ExperimentConfig, out_dir: &Path) -> Result<RunSummary> {
    let sweep = config.contrast.clone().unwrap_or_default();
    if sweep.lengths_m.is_empty() || sweep.energies_nj.is_empty() {
        return Err(ExperimentError::Config(
            "contrast sweep needs at least one length and one energy".into(),
        ));
    }
    let probe = classical_probe(config.switch.grid_step_ps)?;
    let mut curves: Vec<Curve> = Vec::new();

    for &length_m in &sweep.lengths_m {
        for (kind, exponent, background) in [
            ("classical", 1, 0.0),
            ("single_photon", 2, config.noise.sp_background()),
        ] {
            let mut rows = Vec::with_capacity(sweep.energies_nj.len());
            let mut peak = (f64::NAN, f64::NEG_INFINITY);
            let mut pump_off = None;
            for &energy_nj in &sweep.energies_nj {
                let cfg = config
                    .switch
                    .build_for_length(length_m)?
                    .with_energy(energy_nj)?;
                let window = transmission_window(&cfg)?;
                let report = contrast(&window, &probe, exponent, background)?;
                rows.push(ContrastRow {
                    pump_energy_nj: energy_nj,
                    p_transmit: report.captured + background,
                    p_reflect: 1.0 - report.captured + background,
                    contrast: report.ratio,
                });
                if report.ratio > peak.1 {
                    peak = (energy_nj, report.ratio);
                }
                if energy_nj == 0.0 && background == 0.0 {
                    pump_off = Some(report.ratio);
                }
            }
            output::write_csv(
                &out_dir.join(format!("contrast_{kind}_{}m.csv", format_length(length_m))),
                &rows,
            )?;
            curves.push(Curve {
                kind,
                length_m,
                peak_energy_nj: peak.0,
                peak_contrast: peak.1,
                pump_off_contrast: pump_off,
            });
        }
    }

    let find = |kind: &str, length_m: f64| {
        curves
            .iter()
            .find(|c| c.kind == kind && c.length_m == length_m)
    };
    let mut metrics = Vec::new();
    if let Some(c) = find("classical", 500.0) {
        metrics.push(MetricCheck::new(
            "classical_peak_contrast_500m",
            c.peak_contrast,
            targets::CLASSICAL_PEAK_CONTRAST_500M,
        ));
        metrics.push(MetricCheck::new(
            "classical_peak_energy_nj_500m",
            c.peak_energy_nj,
            targets::CLASSICAL_PEAK_ENERGY_NJ,
        ));
        if let Some(floor) = c.pump_off_contrast {
            metrics.push(MetricCheck::new(
                "pump_off_contrast_500m",
                floor,
                targets::PUMP_OFF_CONTRAST,
            ));
        }
    }
    if let Some(c) = find("single_photon", 500.0) {
        metrics.push(MetricCheck::new(
            "single_photon_peak_contrast_500m",
            c.peak_contrast,
            targets::SINGLE_PHOTON_PEAK_CONTRAST_500M,
        ));
    }
    if let Some(c) = find("classical", 100.0) {
        metrics.push(MetricCheck::new(
            "classical_peak_contrast_100m",
            c.peak_contrast,
            targets::CLASSICAL_CONTRAST_100M,
        ));
    }

    let details = json!({
        "curves": curves
            .iter()
            .map(|c| {
                json!({
                    "kind": c.kind,
                    "length_m": c.length_m,
                    "peak_energy_nj": c.peak_energy_nj,
                    "peak_contrast": c.peak_contrast,
                    "pump_off_contrast": c.pump_off_contrast,
                })
            })
            .collect::<Vec<_>>(),
        "single_photon_background_per_port": config.noise.sp_background(),
    });
    Ok(RunSummary::new(
        config.scenario.tag(),
        config.seed,
        metrics,
        details,
    ))
}
