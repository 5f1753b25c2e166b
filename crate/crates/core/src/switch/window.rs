//! Tracing the switching window with a probe, and inverting the trace.
//!
//! A probe of known shape is swept in delay across the window; the traced
//! curve is the convolution of the probe intensity (raised to the sampling
//! exponent: 1 for classical power, 2 for heralded pairs) with the window.
//! `deconvolve_window` fits the walkoff time back out of such a trace using
//! the known probe and pump shapes, recovering the intrinsic window width
//! even when the probe is much wider than the window.

use crate::error::{CoreError, Result};
use crate::optimize::golden_section;
use crate::profile::SampledProfile;
use crate::switch::config::SwitchConfig;
use crate::switch::fiber::walkoff;
use crate::switch::phase::{phase_for_walkoff, window_from_phase, TransmissionWindow};

/// One traced window: switched-port response versus probe delay.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowScan {
    pub delays_ps: Vec<f64>,
    pub responses: Vec<f64>,
}

impl WindowScan {
    /// Reinterpret a uniform scan as a profile over delay, for width
    /// extraction. Errors if the delays are not uniformly spaced.
    pub fn to_profile(&self) -> Result<SampledProfile> {
        if self.delays_ps.len() < 2 {
            return Err(CoreError::EmptyDelays);
        }
        let step = self.delays_ps[1] - self.delays_ps[0];
        if step <= 0.0 {
            return Err(CoreError::EmptyDelays);
        }
        for w in self.delays_ps.windows(2) {
            if ((w[1] - w[0]) - step).abs() > 1e-9 * step.max(1.0) {
                return Err(CoreError::EmptyDelays);
            }
        }
        SampledProfile::new(self.delays_ps[0], step, self.responses.clone())
    }
}

/// Trace the window: response(d) = integral of probe^exponent (normalized,
/// delayed by d) times the window transmission.
pub fn measured_window(
    window: &TransmissionWindow,
    probe: &SampledProfile,
    exponent: u32,
    delays_ps: &[f64],
) -> Result<WindowScan> {
    if delays_ps.is_empty() {
        return Err(CoreError::EmptyDelays);
    }
    if delays_ps.iter().any(|d| !d.is_finite()) {
        return Err(CoreError::BadParameter {
            name: "delays_ps",
            value: f64::NAN,
        });
    }
    let probe_e = probe.powi_normalized(exponent)?;
    let responses = delays_ps
        .iter()
        .map(|&d| probe_e.overlap_with(|t| window.transmission_at(t + d)))
        .collect();
    Ok(WindowScan {
        delays_ps: delays_ps.to_vec(),
        responses,
    })
}

/// Window capture and on:off contrast at the best probe alignment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContrastReport {
    /// Probe delay that maximizes capture, ps.
    pub delay_ps: f64,
    /// Captured fraction: integral of the aligned probe times T.
    pub captured: f64,
    /// Switched:unswitched ratio (captured + bg) / (1 - captured + bg).
    pub ratio: f64,
}

/// Contrast between the switched and unswitched ports for a unit-area
/// probe, at the alignment that maximizes capture. `background_per_port`
/// adds an equal floor to both ports (0 for an ideal classical readout).
/// Losses do not enter: both ports are read after the same loop.
pub fn contrast(
    window: &TransmissionWindow,
    probe: &SampledProfile,
    exponent: u32,
    background_per_port: f64,
) -> Result<ContrastReport> {
    if !(background_per_port.is_finite() && background_per_port >= 0.0) {
        return Err(CoreError::BadParameter {
            name: "background_per_port",
            value: background_per_port,
        });
    }
    let probe_e = probe.powi_normalized(exponent)?;
    let capture = |d: f64| probe_e.overlap_with(|t| window.transmission_at(t + d));
    // Coarse scan around the window centroid (robust for flat tops), then
    // golden-section refinement between the best point's neighbours.
    let center = window.profile().centroid()? - probe_e.centroid()?;
    let coarse: Vec<(f64, f64)> = (-36..=36)
        .map(|k| {
            let d = center + 5.0 * k as f64;
            (d, capture(d))
        })
        .collect();
    let best = coarse
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .expect("coarse scan is non-empty");
    let lo = coarse[best.saturating_sub(1)].0;
    let hi = coarse[(best + 1).min(coarse.len() - 1)].0;
    let (delay, neg) = golden_section(|d| -capture(d), lo, hi, 1e-3);
    let captured = -neg;
    let ratio = (captured + background_per_port) / (1.0 - captured + background_per_port);
    Ok(ContrastReport {
        delay_ps: delay,
        captured,
        ratio,
    })
}

/// Result of fitting a traced window with the known probe and pump shapes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeconvolutionFit {
    /// Fitted walkoff time, ps.
    pub walkoff_ps: f64,
    /// Fitted amplitude of the trace relative to the model.
    pub amplitude: f64,
    /// Intrinsic window width: walkoff plus pump FWHM, ps.
    pub window_width_ps: f64,
    /// Relative residual of the fit (sum of squares over signal power).
    pub residual_rel: f64,
}

/// Intrinsic width of the configured switching window: the walkoff time
/// plus the pump FWHM (edge rise and fall each contribute half a pump).
pub fn intrinsic_width_ps(config: &SwitchConfig) -> f64 {
    walkoff(&config.fiber).walkoff_ps + config.pump.fwhm_ps()
}

/// Fit the walkoff time to a traced window, holding the pump shape, drive
/// level, and leakage at their configured values. The amplitude is solved
/// in closed form per candidate walkoff; the walkoff itself is found by
/// golden-section search. A trace the model cannot explain to 2% residual
/// is reported as non-convergence.
pub fn deconvolve_window(
    config: &SwitchConfig,
    trace: &WindowScan,
    probe: &SampledProfile,
    exponent: u32,
) -> Result<DeconvolutionFit> {
    if trace.delays_ps.len() < 8 {
        return Err(CoreError::EmptyDelays);
    }
    let pump = config.pump.unit_area_profile(config.grid_step_ps)?;
    let peak_phase = config.nominal_peak_phase();
    let probe_e = probe.powi_normalized(exponent)?;
    let signal_power: f64 = trace.responses.iter().map(|r| r * r).sum();
    if signal_power <= 0.0 {
        return Err(CoreError::FitNonConvergence {
            context: "window trace is identically zero",
        });
    }

    let model = |tau: f64| -> Result<Vec<f64>> {
        let phase = phase_for_walkoff(&pump, peak_phase, tau)?;
        let window = window_from_phase(&phase, config.extinction)?;
        Ok(trace
            .delays_ps
            .iter()
            .map(|&d| probe_e.overlap_with(|t| window.transmission_at(t + d)))
            .collect())
    };
    let objective = |tau: f64| -> Result<(f64, f64)> {
        let m = model(tau)?;
        let mm: f64 = m.iter().map(|v| v * v).sum();
        if mm <= 0.0 {
            return Ok((signal_power, 0.0));
        }
        let my: f64 = m
            .iter()
            .zip(&trace.responses)
            .map(|(mv, yv)| mv * yv)
            .sum();
        let amp = my / mm;
        let sse: f64 = m
            .iter()
            .zip(&trace.responses)
            .map(|(mv, yv)| {
                let r = amp * mv - yv;
                r * r
            })
            .sum();
        Ok((sse, amp))
    };

    // The traced width grows monotonically with the walkoff, so the span of
    // the trace above 10% of peak bounds the search from above.
    let spread = trace
        .to_profile()
        .and_then(|p| p.width_at_fraction(0.1))
        .unwrap_or_else(|_| {
            trace.delays_ps.last().unwrap() - trace.delays_ps.first().unwrap()
        });
    let hi = spread + 4.0 * config.pump.fwhm_ps();
    let (tau_fit, _) = golden_section(
        |tau| objective(tau).map(|(sse, _)| sse).unwrap_or(f64::MAX),
        0.0,
        hi,
        0.01,
    );
    let (sse, amplitude) = objective(tau_fit)?;
    let residual_rel = sse / signal_power;
    if residual_rel > 0.02 {
        return Err(CoreError::FitNonConvergence {
            context: "window trace is not explained by the pump/probe model",
        });
    }
    Ok(DeconvolutionFit {
        walkoff_ps: tau_fit,
        amplitude,
        window_width_ps: tau_fit + config.pump.fwhm_ps(),
        residual_rel,
    })
}
