//! Uniformly sampled temporal profiles.
//!
//! One shared representation for pump envelopes, probe shapes, transmission
//! windows, and per-channel pair densities: a start time, a fixed grid step,
//! and non-negative samples. Integrals use the rectangle rule (`sum * step`),
//! which keeps every derived quantity exactly reproducible for a given grid.

use crate::error::{CoreError, Result};

pub const GAUSSIAN_FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3; // 2*sqrt(2 ln 2)

#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    t0_ps: f64,
    step_ps: f64,
    values: Vec<f64>,
}

impl SampledProfile {
    pub fn new(t0_ps: f64, step_ps: f64, values: Vec<f64>) -> Result<Self> {
        if !(step_ps.is_finite() && step_ps > 0.0) {
            return Err(CoreError::BadParameter {
                name: "step_ps",
                value: step_ps,
            });
        }
        if !t0_ps.is_finite() || values.is_empty() {
            return Err(CoreError::BadProfileSamples);
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(CoreError::BadProfileSamples);
        }
        Ok(Self {
            t0_ps,
            step_ps,
            values,
        })
    }

    /// Gaussian envelope sampled out to `pad_sigmas` on both sides.
    pub fn gaussian(center_ps: f64, fwhm_ps: f64, step_ps: f64, pad_sigmas: f64) -> Result<Self> {
        if !(fwhm_ps.is_finite() && fwhm_ps > 0.0) {
            return Err(CoreError::BadParameter {
                name: "fwhm_ps",
                value: fwhm_ps,
            });
        }
        let sigma = fwhm_ps / GAUSSIAN_FWHM_PER_SIGMA;
        let half_span = pad_sigmas * sigma;
        let n = (2.0 * half_span / step_ps).ceil() as usize + 1;
        let t0 = center_ps - half_span;
        let values = (0..n)
            .map(|i| {
                let t = t0 + i as f64 * step_ps;
                let u = (t - center_ps) / sigma;
                (-0.5 * u * u).exp()
            })
            .collect();
        Self::new(t0, step_ps, values)
    }

    pub fn t0_ps(&self) -> f64 {
        self.t0_ps
    }

    pub fn step_ps(&self) -> f64 {
        self.step_ps
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn t_end_ps(&self) -> f64 {
        self.t0_ps + (self.values.len() - 1) as f64 * self.step_ps
    }

    pub fn time_at(&self, index: usize) -> f64 {
        self.t0_ps + index as f64 * self.step_ps
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(|i| self.time_at(i))
    }

    /// Rectangle-rule integral.
    pub fn area(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.step_ps
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    /// Linear interpolation; zero outside the sampled span.
    pub fn value_at(&self, t_ps: f64) -> f64 {
        let x = (t_ps - self.t0_ps) / self.step_ps;
        if x < 0.0 || x > (self.values.len() - 1) as f64 {
            return 0.0;
        }
        let i = x.floor() as usize;
        if i + 1 >= self.values.len() {
            return self.values[self.values.len() - 1];
        }
        let frac = x - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    /// Rescale samples so the integral is exactly one.
    pub fn normalized(&self) -> Result<Self> {
        let area = self.area();
        if area <= 0.0 {
            return Err(CoreError::ZeroAreaProfile);
        }
        let values = self.values.iter().map(|v| v / area).collect();
        Self::new(self.t0_ps, self.step_ps, values)
    }

    /// Pointwise square, renormalized to unit area.
    pub fn squared_normalized(&self) -> Result<Self> {
        let squared: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        Self::new(self.t0_ps, self.step_ps, squared)?.normalized()
    }

    /// Raise to an integer power, renormalized. `exponent = 1` is a plain copy.
    pub fn powi_normalized(&self, exponent: u32) -> Result<Self> {
        if exponent == 0 {
            return Err(CoreError::BadParameter {
                name: "exponent",
                value: 0.0,
            });
        }
        let raised: Vec<f64> = self.values.iter().map(|v| v.powi(exponent as i32)).collect();
        Self::new(self.t0_ps, self.step_ps, raised)?.normalized()
    }

    pub fn shifted(&self, delta_ps: f64) -> Self {
        Self {
            t0_ps: self.t0_ps + delta_ps,
            step_ps: self.step_ps,
            values: self.values.clone(),
        }
    }

    /// The profile with its minimum sample subtracted everywhere: removes a
    /// constant pedestal (such as a leakage floor) so width extraction sees
    /// only the structure above the baseline.
    pub fn baseline_subtracted(&self) -> Self {
        let min = self.values.iter().cloned().fold(f64::INFINITY, f64::min);
        Self {
            t0_ps: self.t0_ps,
            step_ps: self.step_ps,
            values: self.values.iter().map(|v| v - min).collect(),
        }
    }

    /// Integral of `self(t) * f(t)` over this profile's grid.
    pub fn overlap_with(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| v * f(self.time_at(i)))
            .sum::<f64>()
            * self.step_ps
    }

    /// Full width at `fraction * max`, using the outermost linear-interpolated
    /// crossings so low-level skirts are included.
    pub fn width_at_fraction(&self, fraction: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&fraction) || fraction <= 0.0 {
            return Err(CoreError::BadParameter {
                name: "fraction",
                value: fraction,
            });
        }
        let max = self.max_value();
        if max <= 0.0 {
            return Err(CoreError::ZeroAreaProfile);
        }
        let level = fraction * max;
        let n = self.values.len();
        let mut lo = None;
        for i in 0..n {
            if self.values[i] >= level {
                lo = Some(if i == 0 {
                    self.time_at(0)
                } else {
                    let (a, b) = (self.values[i - 1], self.values[i]);
                    self.time_at(i - 1) + self.step_ps * (level - a) / (b - a)
                });
                break;
            }
        }
        let mut hi = None;
        for i in (0..n).rev() {
            if self.values[i] >= level {
                hi = Some(if i == n - 1 {
                    self.time_at(n - 1)
                } else {
                    let (a, b) = (self.values[i], self.values[i + 1]);
                    self.time_at(i) + self.step_ps * (a - level) / (a - b)
                });
                break;
            }
        }
        match (lo, hi) {
            (Some(l), Some(h)) if h >= l => Ok(h - l),
            _ => Err(CoreError::ZeroAreaProfile),
        }
    }

    /// Full width at half maximum.
    pub fn fwhm(&self) -> Result<f64> {
        self.width_at_fraction(0.5)
    }

    /// Time of the maximum sample.
    pub fn peak_time(&self) -> f64 {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = i;
            }
        }
        self.time_at(best)
    }

    /// First moment of the profile treated as a density.
    pub fn centroid(&self) -> Result<f64> {
        let area = self.area();
        if area <= 0.0 {
            return Err(CoreError::ZeroAreaProfile);
        }
        let m1 = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v * self.time_at(i))
            .sum::<f64>()
            * self.step_ps;
        Ok(m1 / area)
    }

    /// Running integral from the left edge; entry `i` holds the integral up to
    /// sample `i` inclusive. Used for square-window convolutions.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.values
            .iter()
            .map(|v| {
                acc += v * self.step_ps;
                acc
            })
            .collect()
    }
}
