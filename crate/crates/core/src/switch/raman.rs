//! Pump-induced Raman background in the signal band.
//!
//! Spontaneous Raman scattering of the switching pump leaks into the signal
//! wavelength at a rate proportional to fiber length. A collection gate
//! narrower than the walkoff window caps the observable rate, so the
//! expected count per pulse is the smaller of the length-limited and
//! gate-limited rates.

use rand_distr::{Distribution, Poisson};

use crate::error::{CoreError, Result};
use crate::rng::SimRng;
use crate::switch::config::SwitchConfig;

/// Expected Raman counts per pump pulse, optionally limited by a
/// collection gate of the given width.
pub fn raman_expected_per_pulse(config: &SwitchConfig, gate_ps: Option<f64>) -> Result<f64> {
    let length_limited = config.raman_per_m * config.fiber.length_m;
    match gate_ps {
        None => Ok(length_limited),
        Some(gate) => {
            if !(gate.is_finite() && gate > 0.0) {
                return Err(CoreError::BadParameter {
                    name: "gate_ps",
                    value: gate,
                });
            }
            Ok(length_limited.min(config.raman_per_ps * gate))
        }
    }
}

/// Poisson-sampled Raman counts over a pulse train.
pub fn raman_counts(expected_per_pulse: f64, n_pulses: u64, rng: &mut SimRng) -> Result<u64> {
    if !(expected_per_pulse.is_finite() && expected_per_pulse >= 0.0) {
        return Err(CoreError::BadParameter {
            name: "expected_per_pulse",
            value: expected_per_pulse,
        });
    }
    let mean = expected_per_pulse * n_pulses as f64;
    if mean == 0.0 {
        return Ok(0);
    }
    let poisson = Poisson::new(mean).map_err(|_| CoreError::BadParameter {
        name: "poisson_mean",
        value: mean,
    })?;
    Ok(poisson.sample(rng) as u64)
}
