//! Switching-window traces and width extraction.
//!
//! For each loop length the window is traced by sweeping the default
//! (tailed) probe in delay, once with exponent 1 (classical power) and
//! once with exponent 2 (heralded pairs). Each trace goes to a CSV with
//! the leakage pedestal subtracted and the peak normalized to one.
//!
//! Widths come out three ways:
//! - the intrinsic window width is fitted back out of the exponent-2
//!   trace with the known pump and probe shapes (deconvolution);
//! - the raw exponent-1 trace width at a tenth of peak is compared to the
//!   intrinsic width (the broadening the wide probe adds);
//! - for a loop much shorter than the probe, the trace FWHM over the
//!   probe FWHM checks that the sampler reproduces the probe itself. The
//!   walkoff fit is skipped there: such a trace carries no usable walkoff
//!   information, only the probe shape.

use std::path::Path;

use nolm_core::switch::{
    classical_probe, deconvolve_window, intrinsic_width_ps, measured_window,
    transmission_window,
};
use nolm_core::CoreError;
use serde::Serialize;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::{ExperimentError, Result};
use crate::output;
use crate::summary::{MetricCheck, RunSummary};
use crate::targets;

use super::format_length;

/// Loops shorter than this carry no measurable walkoff under the default
/// probe, so the deconvolution fit is not attempted.
const MIN_DECONVOLUTION_LENGTH_M: f64 = 10.0;

#[derive(Debug, Serialize)]
struct TraceRow {
    delay_ps: f64,
    normalized_response: f64,
}

pub fn run(config: &ExperimentConfig, out_dir: &Path) -> Result<RunSummary> {
    let sweep = config.window.clone().unwrap_or_default();
    if sweep.lengths_m.is_empty() {
        return Err(ExperimentError::Config(
            "window sweep needs at least one length".into(),
        ));
    }
    if !(sweep.delay_step_ps > 0.0 && sweep.delay_pad_ps > 0.0) {
        return Err(ExperimentError::Config(
            "window sweep needs a positive delay step and pad".into(),
        ));
    }
    let probe = classical_probe(config.switch.grid_step_ps)?;
    let probe_fwhm = probe.fwhm()?;

    let mut metrics = Vec::new();
    let mut per_length = Vec::new();
    for &length_m in &sweep.lengths_m {
        let cfg = config.switch.build_for_length(length_m)?;
        let window = transmission_window(&cfg)?;
        let intrinsic_ps = intrinsic_width_ps(&cfg);
        let lo = window.profile().t0_ps() - sweep.delay_pad_ps;
        let hi = window.profile().t_end_ps() + sweep.delay_pad_ps;
        let n = ((hi - lo) / sweep.delay_step_ps).ceil() as usize;
        let delays: Vec<f64> = (0..=n)
            .map(|i| lo + i as f64 * sweep.delay_step_ps)
            .collect();

        let mut width_10pct_exp1 = f64::NAN;
        let mut fwhm_exp1 = f64::NAN;
        let mut fits = Vec::new();
        for exponent in [1u32, 2u32] {
            let scan = measured_window(&window, &probe, exponent, &delays)?;
            let trace = scan.to_profile()?.baseline_subtracted();
            let peak = trace.max_value();
            if peak <= 0.0 {
                return Err(ExperimentError::Config(format!(
                    "window trace at {length_m} m is flat; widen the sweep"
                )));
            }
            let rows: Vec<TraceRow> = delays
                .iter()
                .zip(trace.values())
                .map(|(&d, &v)| TraceRow {
                    delay_ps: d,
                    normalized_response: v / peak,
                })
                .collect();
            output::write_csv(
                &out_dir.join(format!(
                    "window_trace_{}m_exp{exponent}.csv",
                    format_length(length_m)
                )),
                &rows,
            )?;
            if exponent == 1 {
                width_10pct_exp1 = trace.width_at_fraction(0.1)?;
                fwhm_exp1 = trace.fwhm()?;
            }
            if length_m >= MIN_DECONVOLUTION_LENGTH_M {
                match deconvolve_window(&cfg, &scan, &probe, exponent) {
                    Ok(fit) => fits.push(json!({
                        "exponent": exponent,
                        "walkoff_ps": fit.walkoff_ps,
                        "window_width_ps": fit.window_width_ps,
                        "amplitude": fit.amplitude,
                        "residual_rel": fit.residual_rel,
                    })),
                    Err(CoreError::FitNonConvergence { .. }) => fits.push(json!({
                        "exponent": exponent,
                        "error": "fit did not converge",
                    })),
                    Err(e) => return Err(e.into()),
                }
                if exponent == 2 {
                    let fitted_width = fits
                        .last()
                        .and_then(|f| f.get("window_width_ps"))
                        .and_then(|v| v.as_f64())
                        .unwrap_or(f64::NAN);
                    if length_m == 100.0 {
                        metrics.push(MetricCheck::new(
                            "deconvolved_width_100m_ps",
                            fitted_width,
                            targets::DECONVOLVED_WIDTH_100M_PS,
                        ));
                    } else if length_m == 500.0 {
                        metrics.push(MetricCheck::new(
                            "deconvolved_width_500m_ps",
                            fitted_width,
                            targets::DECONVOLVED_WIDTH_500M_PS,
                        ));
                    }
                }
            }
        }

        if length_m == 100.0 || length_m == 500.0 {
            metrics.push(MetricCheck::new(
                &format!("trace_broadening_{}m_ps", format_length(length_m)),
                width_10pct_exp1 - intrinsic_ps,
                targets::TRACE_BROADENING_PS,
            ));
        }
        if length_m < MIN_DECONVOLUTION_LENGTH_M {
            metrics.push(MetricCheck::new(
                &format!("sampler_fwhm_ratio_{}m", format_length(length_m)),
                fwhm_exp1 / probe_fwhm,
                targets::SAMPLER_FWHM_RATIO,
            ));
        }
        per_length.push(json!({
            "length_m": length_m,
            "intrinsic_width_ps": intrinsic_ps,
            "trace_width_10pct_exp1_ps": width_10pct_exp1,
            "trace_fwhm_exp1_ps": fwhm_exp1,
            "deconvolution_fits": fits,
        }));
    }

    let details = json!({
        "probe_fwhm_ps": probe_fwhm,
        "probe_width_10pct_ps": probe.width_at_fraction(0.1)?,
        "lengths": per_length,
    });
    Ok(RunSummary::new(
        config.scenario.tag(),
        config.seed,
        metrics,
        details,
    ))
}
