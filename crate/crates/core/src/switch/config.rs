//! Switch operating point: fiber, pump, energy scale, extinction, grid,
//! port losses, and background rates.

use crate::error::{CoreError, Result};
use crate::switch::fiber::FiberParams;
use crate::switch::pump::PumpPulse;

/// Pump energy that drives a peak nonlinear phase of pi, nJ.
pub const DEFAULT_PI_ENERGY_NJ: f64 = 2.5;
/// Interferometer leakage floor. The transmission law
/// T = eps + (1 - 2 eps) sin^2(phi/2) then spans [eps, 1 - eps], so the
/// best-case on:off ratio is (1 - eps)/eps = 150.
pub const DEFAULT_EXTINCTION: f64 = 1.0 / 151.0;
/// Default time grid step, ps.
pub const DEFAULT_GRID_STEP_PS: f64 = 0.5;
/// Raman scattering into the signal band, probability per pulse per metre.
pub const DEFAULT_RAMAN_PER_M: f64 = 4.0e-7;
/// Raman probability per pulse per picosecond of collection gate.
pub const DEFAULT_RAMAN_PER_PS: f64 = 2.0e-7;

/// Insertion losses (transmit port, reflect port) in dB for short loops.
pub const PORT_LOSSES_SHORT_DB: (f64, f64) = (1.3, 1.7);
/// Insertion losses for long (> 300 m) loops, dB.
pub const PORT_LOSSES_LONG_DB: (f64, f64) = (1.7, 2.1);

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchConfig {
    pub fiber: FiberParams,
    pub pump: PumpPulse,
    pub pump_energy_nj: f64,
    pub pi_energy_nj: f64,
    pub extinction: f64,
    pub grid_step_ps: f64,
    /// Insertion loss toward the transmit port, dB.
    pub loss_transmit_db: f64,
    /// Insertion loss toward the reflect port, dB.
    pub loss_reflect_db: f64,
    pub raman_per_m: f64,
    pub raman_per_ps: f64,
}

impl SwitchConfig {
    /// Stock configuration for a loop of the given length, driven at the
    /// pi energy. Port losses follow the bench presets: 1.3/1.7 dB for
    /// loops up to 300 m, 1.7/2.1 dB beyond.
    pub fn for_length(length_m: f64) -> Result<Self> {
        let fiber = FiberParams::with_length(length_m)?;
        let (loss_t, loss_r) = if length_m > 300.0 {
            PORT_LOSSES_LONG_DB
        } else {
            PORT_LOSSES_SHORT_DB
        };
        Self::new(
            fiber,
            PumpPulse::default_gaussian(),
            DEFAULT_PI_ENERGY_NJ,
            DEFAULT_PI_ENERGY_NJ,
            DEFAULT_EXTINCTION,
            DEFAULT_GRID_STEP_PS,
            loss_t,
            loss_r,
        )
    }

    #[allow(clippy::too_many_arguments)]
    pub fn new(
        fiber: FiberParams,
        pump: PumpPulse,
        pump_energy_nj: f64,
        pi_energy_nj: f64,
        extinction: f64,
        grid_step_ps: f64,
        loss_transmit_db: f64,
        loss_reflect_db: f64,
    ) -> Result<Self> {
        if !(pump_energy_nj.is_finite() && pump_energy_nj >= 0.0) {
            return Err(CoreError::BadParameter {
                name: "pump_energy_nj",
                value: pump_energy_nj,
            });
        }
        if !(pi_energy_nj.is_finite() && pi_energy_nj > 0.0) {
            return Err(CoreError::BadParameter {
                name: "pi_energy_nj",
                value: pi_energy_nj,
            });
        }
        if !(extinction.is_finite() && (0.0..0.5).contains(&extinction)) {
            return Err(CoreError::BadParameter {
                name: "extinction",
                value: extinction,
            });
        }
        for (name, value) in [
            ("loss_transmit_db", loss_transmit_db),
            ("loss_reflect_db", loss_reflect_db),
        ] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(CoreError::BadParameter { name, value });
            }
        }
        let fwhm = pump.fwhm_ps();
        if !(grid_step_ps.is_finite() && grid_step_ps > 0.0) || grid_step_ps > fwhm / 5.0 {
            return Err(CoreError::GridTooCoarse {
                step_ps: grid_step_ps,
                fwhm_ps: fwhm,
            });
        }
        Ok(Self {
            fiber,
            pump,
            pump_energy_nj,
            pi_energy_nj,
            extinction,
            grid_step_ps,
            loss_transmit_db,
            loss_reflect_db,
            raman_per_m: DEFAULT_RAMAN_PER_M,
            raman_per_ps: DEFAULT_RAMAN_PER_PS,
        })
    }

    pub fn with_energy(mut self, pump_energy_nj: f64) -> Result<Self> {
        if !(pump_energy_nj.is_finite() && pump_energy_nj >= 0.0) {
            return Err(CoreError::BadParameter {
                name: "pump_energy_nj",
                value: pump_energy_nj,
            });
        }
        self.pump_energy_nj = pump_energy_nj;
        Ok(self)
    }

    /// Peak nonlinear phase the stated energy can drive, radians.
    pub fn nominal_peak_phase(&self) -> f64 {
        std::f64::consts::PI * self.pump_energy_nj / self.pi_energy_nj
    }

    /// Fraction of photons surviving the route to the given port.
    pub fn survival(&self, loss_db: f64) -> f64 {
        10f64.powf(-loss_db / 10.0)
    }
}

/// Split a total pump energy between two colors with a relative imbalance:
/// the first color gets (1 + imbalance)/2 of the total, the second the
/// remainder. `imbalance` must lie in [-1, 1]; 0 means an even split.
pub fn split_energy(total_nj: f64, imbalance: f64) -> Result<(f64, f64)> {
    if !(total_nj.is_finite() && total_nj >= 0.0) {
        return Err(CoreError::BadParameter {
            name: "total_nj",
            value: total_nj,
        });
    }
    if !(imbalance.is_finite() && (-1.0..=1.0).contains(&imbalance)) {
        return Err(CoreError::BadParameter {
            name: "imbalance",
            value: imbalance,
        });
    }
    let first = total_nj * 0.5 * (1.0 + imbalance);
    Ok((first, total_nj - first))
}
