//! Cross-phase-modulation profile and the resulting switching window.
//!
//! The signal counter-propagates against the pump inside the loop, so the
//! phase it accumulates at arrival time t is the pump energy collected over
//! a sliding window of width tau_s (the walkoff time) centered on t:
//!
//!   phi(t) = pi * (E / E_pi) * integral of the unit-area pump over
//!            [t - tau_s/2, t + tau_s/2]
//!
//! The loop converts phase to routing via
//!
//!   T(t) = eps + (1 - 2 eps) sin^2(phi(t)/2)
//!
//! where eps is the leakage floor, so T spans [eps, 1 - eps].

use crate::error::{CoreError, Result};
use crate::profile::SampledProfile;
use crate::switch::config::SwitchConfig;
use crate::switch::fiber::walkoff;

/// Nonlinear phase accumulated by the signal versus its arrival time.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    phi: SampledProfile,
}

impl PhaseProfile {
    pub fn profile(&self) -> &SampledProfile {
        &self.phi
    }

    /// Phase at an arrival time; zero outside the sampled span.
    pub fn at(&self, t_ps: f64) -> f64 {
        self.phi.value_at(t_ps)
    }

    pub fn peak(&self) -> f64 {
        self.phi.max_value()
    }

    /// Pointwise sum of several phase contributions (pump colors add).
    /// The result is sampled on a grid covering every input span at the
    /// finest input step.
    pub fn combine(parts: &[PhaseProfile]) -> Result<PhaseProfile> {
        if parts.is_empty() {
            return Err(CoreError::BadProfileSamples);
        }
        let t0 = parts.iter().map(|p| p.phi.t0_ps()).fold(f64::MAX, f64::min);
        let t1 = parts
            .iter()
            .map(|p| p.phi.t_end_ps())
            .fold(f64::MIN, f64::max);
        let step = parts
            .iter()
            .map(|p| p.phi.step_ps())
            .fold(f64::MAX, f64::min);
        let n = ((t1 - t0) / step).ceil() as usize + 1;
        let values = (0..n)
            .map(|i| {
                let t = t0 + i as f64 * step;
                parts.iter().map(|p| p.at(t)).sum()
            })
            .collect();
        Ok(PhaseProfile {
            phi: SampledProfile::new(t0, step, values)?,
        })
    }
}

/// Transmission toward the switched port versus signal arrival time.
/// Outside the sampled span the window sits at the leakage floor.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionWindow {
    grid: SampledProfile,
    extinction: f64,
}

impl TransmissionWindow {
    /// Wrap an explicit transmission curve (samples in [0, 1]) with its
    /// leakage floor. Mainly for synthetic windows in tests and scans.
    pub fn from_samples(grid: SampledProfile, extinction: f64) -> Result<Self> {
        if !(extinction.is_finite() && (0.0..0.5).contains(&extinction)) {
            return Err(CoreError::BadParameter {
                name: "extinction",
                value: extinction,
            });
        }
        if grid.values().iter().any(|&v| v > 1.0) {
            return Err(CoreError::BadProfileSamples);
        }
        Ok(Self { grid, extinction })
    }

    pub fn profile(&self) -> &SampledProfile {
        &self.grid
    }

    /// The same window opened `delta_ps` later.
    pub fn shifted(&self, delta_ps: f64) -> Self {
        Self {
            grid: self.grid.shifted(delta_ps),
            extinction: self.extinction,
        }
    }

    /// Extend the sampled grid with leakage-floor samples so it covers at
    /// least [lo_ps, hi_ps], keeping the step and sample alignment.
    pub fn extended_to(&self, lo_ps: f64, hi_ps: f64) -> Result<Self> {
        if !(lo_ps.is_finite() && hi_ps.is_finite()) || lo_ps > hi_ps {
            return Err(CoreError::BadParameter {
                name: "lo_ps..hi_ps",
                value: hi_ps - lo_ps,
            });
        }
        let h = self.grid.step_ps();
        let pre = ((self.grid.t0_ps() - lo_ps) / h).ceil().max(0.0) as usize;
        let post = ((hi_ps - self.grid.t_end_ps()) / h).ceil().max(0.0) as usize;
        if pre == 0 && post == 0 {
            return Ok(self.clone());
        }
        let mut values = Vec::with_capacity(pre + self.grid.len() + post);
        values.extend(std::iter::repeat(self.extinction).take(pre));
        values.extend_from_slice(self.grid.values());
        values.extend(std::iter::repeat(self.extinction).take(post));
        Ok(Self {
            grid: SampledProfile::new(self.grid.t0_ps() - pre as f64 * h, h, values)?,
            extinction: self.extinction,
        })
    }

    pub fn extinction(&self) -> f64 {
        self.extinction
    }

    pub fn transmission_at(&self, t_ps: f64) -> f64 {
        if t_ps < self.grid.t0_ps() || t_ps > self.grid.t_end_ps() {
            self.extinction
        } else {
            self.grid.value_at(t_ps)
        }
    }

    pub fn reflection_at(&self, t_ps: f64) -> f64 {
        1.0 - self.transmission_at(t_ps)
    }

    pub fn peak(&self) -> f64 {
        self.grid.max_value()
    }

    /// Window with the leakage floor subtracted, for width measurements.
    pub fn above_floor(&self) -> SampledProfile {
        let values = self
            .grid
            .values()
            .iter()
            .map(|&v| (v - self.extinction).max(0.0))
            .collect();
        SampledProfile::new(self.grid.t0_ps(), self.grid.step_ps(), values)
            .expect("floor subtraction keeps samples valid")
    }
}

/// Phase profile for an explicit walkoff time. The pump must be unit-area
/// on a uniform grid; `peak_phase` is the phase a full capture would reach.
pub fn phase_for_walkoff(
    pump: &SampledProfile,
    peak_phase: f64,
    tau_s_ps: f64,
) -> Result<PhaseProfile> {
    if !(peak_phase.is_finite() && peak_phase >= 0.0) {
        return Err(CoreError::BadParameter {
            name: "peak_phase",
            value: peak_phase,
        });
    }
    if !(tau_s_ps.is_finite() && tau_s_ps >= 0.0) {
        return Err(CoreError::BadParameter {
            name: "tau_s_ps",
            value: tau_s_ps,
        });
    }
    let h = pump.step_ps();
    let total = pump.area();
    if total <= 0.0 {
        return Err(CoreError::ZeroAreaProfile);
    }
    // Cumulative integral of the pump treated as piecewise-constant cells:
    // cell k covers [t_k - h/2, t_k + h/2] and carries mass p[k] * h.
    let cum: Vec<f64> = pump
        .values()
        .iter()
        .scan(0.0, |acc, &v| {
            *acc += v * h;
            Some(*acc)
        })
        .collect();
    let left_edge = pump.t0_ps() - 0.5 * h;
    let cum_at = |t: f64| -> f64 {
        let x = (t - left_edge) / h;
        if x <= 0.0 {
            return 0.0;
        }
        if x >= pump.len() as f64 {
            return total;
        }
        let k = x.floor() as usize;
        let frac = x - k as f64;
        let base = if k > 0 { cum[k - 1] } else { 0.0 };
        base + frac * pump.values()[k] * h
    };

    let half = 0.5 * tau_s_ps;
    let t0 = pump.t0_ps() - half - h;
    let t_end = pump.t_end_ps() + half + h;
    let n = ((t_end - t0) / h).ceil() as usize + 1;
    let scale = peak_phase / total;
    let values = (0..n)
        .map(|i| {
            let t = t0 + i as f64 * h;
            (scale * (cum_at(t + half) - cum_at(t - half))).max(0.0)
        })
        .collect();
    Ok(PhaseProfile {
        phi: SampledProfile::new(t0, h, values)?,
    })
}

/// Phase profile for a configured switch.
pub fn phase_profile(config: &SwitchConfig) -> Result<PhaseProfile> {
    let pump = config.pump.unit_area_profile(config.grid_step_ps)?;
    let tau_s = walkoff(&config.fiber).walkoff_ps;
    phase_for_walkoff(&pump, config.nominal_peak_phase(), tau_s)
}

/// Map a phase profile through the loop transfer function.
pub fn window_from_phase(phase: &PhaseProfile, extinction: f64) -> Result<TransmissionWindow> {
    if !(extinction.is_finite() && (0.0..0.5).contains(&extinction)) {
        return Err(CoreError::BadParameter {
            name: "extinction",
            value: extinction,
        });
    }
    let p = phase.profile();
    let values = p
        .values()
        .iter()
        .map(|&phi| extinction + (1.0 - 2.0 * extinction) * (0.5 * phi).sin().powi(2))
        .collect();
    Ok(TransmissionWindow {
        grid: SampledProfile::new(p.t0_ps(), p.step_ps(), values)?,
        extinction,
    })
}

/// Switching window for a configured switch.
pub fn transmission_window(config: &SwitchConfig) -> Result<TransmissionWindow> {
    window_from_phase(&phase_profile(config)?, config.extinction)
}

/// Infer the drive phase from measured port powers, assuming an ideal
/// loop: phi = 2 asin(sqrt(P_t / (P_t + P_r))). Leakage biases a single
/// estimate, but two phases that sum to pi keep that sum exact because the
/// bias is antisymmetric about the balanced point.
pub fn phase_from_port_powers(p_transmit: f64, p_reflect: f64) -> Result<f64> {
    for (name, value) in [("p_transmit", p_transmit), ("p_reflect", p_reflect)] {
        if !(value.is_finite() && value >= 0.0) {
            return Err(CoreError::BadParameter { name, value });
        }
    }
    let total = p_transmit + p_reflect;
    if total <= 0.0 {
        return Err(CoreError::BadParameter {
            name: "p_transmit + p_reflect",
            value: total,
        });
    }
    Ok(2.0 * (p_transmit / total).sqrt().asin())
}
