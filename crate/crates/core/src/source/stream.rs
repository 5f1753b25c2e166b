//! Time-multiplexed entangled-pair stream types.

use crate::error::{CoreError, Result};
use crate::profile::SampledProfile;
use crate::quantum::PolarizationKet;

/// Spatial output mode after the demultiplexing switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpatialMode {
    /// Transmitted (switched-out) mode.
    T,
    /// Reflected (pass-through) mode.
    R,
}

/// One time-bin copy of the pump after the unbalanced interferometer.
#[derive(Debug, Clone, PartialEq)]
pub struct PumpChannel {
    pub t_center_ps: f64,
    /// Field amplitude sqrt(c_k); pair yield scales as c_k^2.
    pub amplitude: f64,
    pub jones: PolarizationKet,
}

/// One entangled-pair branch: a time bin carrying a polarization state in
/// a spatial mode, with the pair-emission profile inside the bin.
#[derive(Debug, Clone, PartialEq)]
pub struct EntangledChannel {
    pub t_center_ps: f64,
    pub weight: f64,
    pub pol_state: PolarizationKet,
    pub temporal_profile: SampledProfile,
    pub spatial_mode: SpatialMode,
}

/// A set of entangled channels whose weights form a probability
/// distribution over time bins and spatial modes.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplexedStream {
    channels: Vec<EntangledChannel>,
}

impl MultiplexedStream {
    /// Validates: weights non-negative summing to 1 within 1e-9, pair
    /// states 2-qubit, and distinct time bins at least 1 ps apart
    /// (channels sharing a bin in different spatial modes are fine).
    pub fn new(channels: Vec<EntangledChannel>) -> Result<Self> {
        if channels.is_empty() {
            return Err(CoreError::BadProfileSamples);
        }
        let mut total = 0.0;
        for ch in &channels {
            if !(ch.weight.is_finite() && ch.weight >= 0.0) {
                return Err(CoreError::BadParameter {
                    name: "weight",
                    value: ch.weight,
                });
            }
            if ch.pol_state.dim() != 4 {
                return Err(CoreError::DimensionMismatch {
                    expected: 4,
                    got: ch.pol_state.dim(),
                });
            }
            total += ch.weight;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(CoreError::NotNormalized {
                deviation: (total - 1.0).abs(),
            });
        }
        let mut bins: Vec<f64> = Vec::new();
        for ch in &channels {
            if !bins.iter().any(|b| (b - ch.t_center_ps).abs() < 1e-9) {
                bins.push(ch.t_center_ps);
            }
        }
        for (i, a) in bins.iter().enumerate() {
            for b in &bins[i + 1..] {
                if (a - b).abs() < 1.0 {
                    return Err(CoreError::BinsTooClose);
                }
            }
        }
        Ok(Self { channels })
    }

    pub fn channels(&self) -> &[EntangledChannel] {
        &self.channels
    }

    /// Earliest and latest times spanned by any channel profile.
    pub fn support_ps(&self) -> (f64, f64) {
        let lo = self
            .channels
            .iter()
            .map(|c| c.temporal_profile.t0_ps())
            .fold(f64::MAX, f64::min);
        let hi = self
            .channels
            .iter()
            .map(|c| c.temporal_profile.t_end_ps())
            .fold(f64::MIN, f64::max);
        (lo, hi)
    }

    /// Rigid translation of every bin and profile.
    pub fn shifted(&self, delta_ps: f64) -> Self {
        let channels = self
            .channels
            .iter()
            .map(|c| EntangledChannel {
                t_center_ps: c.t_center_ps + delta_ps,
                temporal_profile: c.temporal_profile.shifted(delta_ps),
                ..c.clone()
            })
            .collect();
        Self { channels }
    }
}

/// Source operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceConfig {
    /// Pump pulse FWHM entering the pair source, ps.
    pub pump_fwhm_ps: f64,
    /// Pulse train repetition rate, MHz.
    pub rep_rate_mhz: f64,
    /// Pair emission probability per pulse; must stay perturbative (< 0.1).
    pub pair_prob_per_pulse: f64,
    /// Time-bin separation, ps.
    pub delta_t_ps: f64,
    /// Field-amplitude-squared ratio of the early to the late bin.
    pub c1_over_c2: f64,
    /// Center of the early bin on the stream clock, ps.
    pub t0_ps: f64,
    /// Sampling step for pair-emission profiles, ps.
    pub grid_step_ps: f64,
}

impl Default for SourceConfig {
    fn default() -> Self {
        Self {
            pump_fwhm_ps: 100.0,
            rep_rate_mhz: 50.0,
            pair_prob_per_pulse: 0.01,
            delta_t_ps: 300.0,
            c1_over_c2: 1.25,
            t0_ps: 225.0,
            grid_step_ps: 0.5,
        }
    }
}

impl SourceConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, value, lo) in [
            ("pump_fwhm_ps", self.pump_fwhm_ps, 0.0),
            ("rep_rate_mhz", self.rep_rate_mhz, 0.0),
            ("delta_t_ps", self.delta_t_ps, 1.0),
            ("c1_over_c2", self.c1_over_c2, 0.0),
            ("grid_step_ps", self.grid_step_ps, 0.0),
        ] {
            if !(value.is_finite() && value > lo) {
                return Err(CoreError::BadParameter { name, value });
            }
        }
        if !self.t0_ps.is_finite() {
            return Err(CoreError::BadParameter {
                name: "t0_ps",
                value: self.t0_ps,
            });
        }
        if !(self.pair_prob_per_pulse >= 0.0 && self.pair_prob_per_pulse < 0.1) {
            return Err(CoreError::BadParameter {
                name: "pair_prob_per_pulse",
                value: self.pair_prob_per_pulse,
            });
        }
        Ok(())
    }
}
