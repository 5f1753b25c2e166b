//! Classical probe pulse used to trace out the switching window.
//!
//! The bench probe is a gain-switched diode pulse: a ~100-ps Gaussian core
//! with a slow exponential relaxation tail on the trailing side. The tail
//! matters: it is what broadens the traced window well beyond the probe
//! FWHM and what caps the short-loop contrast, so the default shape keeps
//! an explicit tail calibrated to reproduce both effects (traced windows
//! 150-200 ps wider at a tenth of peak than the intrinsic window, and a
//! 100-m classical contrast of roughly 5:1).

use crate::error::{CoreError, Result};
use crate::profile::{SampledProfile, GAUSSIAN_FWHM_PER_SIGMA};

/// Core FWHM of the stock probe, ps.
pub const DEFAULT_PROBE_FWHM_PS: f64 = 100.0;
/// Weight of the relaxation tail in the stock probe.
pub const DEFAULT_PROBE_TAIL_FRACTION: f64 = 0.32;
/// Exponential decay constant of the tail, ps.
pub const DEFAULT_PROBE_TAIL_SCALE_PS: f64 = 200.0;
/// Support of the stock probe relative to the core peak, ps.
pub const DEFAULT_PROBE_SPAN_PS: (f64, f64) = (-110.0, 260.0);

/// Gaussian core plus one-sided exponential tail, truncated to
/// `[span.0, span.1]` around the core peak at t = 0 and normalized to unit
/// area. `tail_fraction = 0` gives a plain truncated Gaussian.
pub fn tailed_probe(
    fwhm_ps: f64,
    tail_fraction: f64,
    tail_scale_ps: f64,
    span_ps: (f64, f64),
    step_ps: f64,
) -> Result<SampledProfile> {
    if !(fwhm_ps.is_finite() && fwhm_ps > 0.0) {
        return Err(CoreError::BadParameter {
            name: "fwhm_ps",
            value: fwhm_ps,
        });
    }
    if !(0.0..1.0).contains(&tail_fraction) {
        return Err(CoreError::BadParameter {
            name: "tail_fraction",
            value: tail_fraction,
        });
    }
    if !(tail_scale_ps.is_finite() && tail_scale_ps > 0.0) {
        return Err(CoreError::BadParameter {
            name: "tail_scale_ps",
            value: tail_scale_ps,
        });
    }
    if !(span_ps.0.is_finite() && span_ps.1.is_finite() && span_ps.0 < 0.0 && span_ps.1 > 0.0) {
        return Err(CoreError::BadParameter {
            name: "span_ps",
            value: span_ps.1 - span_ps.0,
        });
    }
    let sigma = fwhm_ps / GAUSSIAN_FWHM_PER_SIGMA;
    let gauss_peak = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    let n = ((span_ps.1 - span_ps.0) / step_ps).ceil() as usize + 1;
    let values: Vec<f64> = (0..n)
        .map(|i| {
            let t = span_ps.0 + i as f64 * step_ps;
            let u = t / sigma;
            let core = (1.0 - tail_fraction) * gauss_peak * (-0.5 * u * u).exp();
            let tail = if t >= 0.0 {
                tail_fraction / tail_scale_ps * (-t / tail_scale_ps).exp()
            } else {
                0.0
            };
            core + tail
        })
        .collect();
    SampledProfile::new(span_ps.0, step_ps, values)?.normalized()
}

/// Stock classical probe on the given grid.
pub fn classical_probe(step_ps: f64) -> Result<SampledProfile> {
    tailed_probe(
        DEFAULT_PROBE_FWHM_PS,
        DEFAULT_PROBE_TAIL_FRACTION,
        DEFAULT_PROBE_TAIL_SCALE_PS,
        DEFAULT_PROBE_SPAN_PS,
        step_ps,
    )
}
