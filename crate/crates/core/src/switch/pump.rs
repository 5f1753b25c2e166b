//! Switching-pump pulse shapes.

use crate::error::{CoreError, Result};
use crate::profile::SampledProfile;

/// Default pump FWHM, ps.
pub const DEFAULT_PUMP_FWHM_PS: f64 = 5.0;

/// Temporal shape of one switching-pump pulse. The energy scale lives in
/// [`SwitchConfig`](crate::switch::SwitchConfig); the shape here always
/// integrates to one.
#[derive(Debug, Clone, PartialEq)]
pub enum PumpPulse {
    Gaussian { center_ps: f64, fwhm_ps: f64 },
    Sampled(SampledProfile),
}

impl PumpPulse {
    pub fn gaussian(center_ps: f64, fwhm_ps: f64) -> Result<Self> {
        if !center_ps.is_finite() {
            return Err(CoreError::BadParameter {
                name: "center_ps",
                value: center_ps,
            });
        }
        if !(fwhm_ps.is_finite() && fwhm_ps > 0.0) {
            return Err(CoreError::BadParameter {
                name: "fwhm_ps",
                value: fwhm_ps,
            });
        }
        Ok(Self::Gaussian { center_ps, fwhm_ps })
    }

    /// Stock 5-ps pump centered at t = 0.
    pub fn default_gaussian() -> Self {
        Self::Gaussian {
            center_ps: 0.0,
            fwhm_ps: DEFAULT_PUMP_FWHM_PS,
        }
    }

    pub fn fwhm_ps(&self) -> f64 {
        match self {
            Self::Gaussian { fwhm_ps, .. } => *fwhm_ps,
            Self::Sampled(p) => p.fwhm().unwrap_or(0.0),
        }
    }

    pub fn center_ps(&self) -> f64 {
        match self {
            Self::Gaussian { center_ps, .. } => *center_ps,
            Self::Sampled(p) => p.centroid().unwrap_or(0.0),
        }
    }

    /// Unit-area sampling on a uniform grid of the given step. Gaussian
    /// pulses are padded to +-6 sigma so the truncated tails carry
    /// negligible weight; sampled pulses are linearly resampled.
    pub fn unit_area_profile(&self, step_ps: f64) -> Result<SampledProfile> {
        match self {
            Self::Gaussian { center_ps, fwhm_ps } => {
                SampledProfile::gaussian(*center_ps, *fwhm_ps, step_ps, 6.0)?.normalized()
            }
            Self::Sampled(p) => {
                if p.area() <= 0.0 {
                    return Err(CoreError::ZeroAreaProfile);
                }
                let n = ((p.t_end_ps() - p.t0_ps()) / step_ps).ceil() as usize + 1;
                let values = (0..n)
                    .map(|i| p.value_at(p.t0_ps() + i as f64 * step_ps))
                    .collect();
                SampledProfile::new(p.t0_ps(), step_ps, values)?.normalized()
            }
        }
    }
}
