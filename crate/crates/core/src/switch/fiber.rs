//! Group-velocity walkoff between the switching pump and the signal.
//!
//! Inside the loop fiber the pump (1550-nm band) is slower than the O-band
//! signal. Over a fiber of length L the pump falls behind by the walkoff
//! time tau_s = L * (1/v_p - 1/v_s); equivalently, the signal pulls ahead by
//! a distance delta_x with tau_s = delta_x / v_s. Only the difference of the
//! inverse group velocities matters; the split between them is a convention.

use crate::error::{CoreError, Result};

/// Inverse group velocity of the signal, ps/m (group index ~1.467).
pub const DEFAULT_INV_GV_SIGNAL_PS_PER_M: f64 = 4893.0;
/// Default pump-signal walkoff rate, ps/m.
pub const DEFAULT_WALKOFF_PS_PER_M: f64 = 1.7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberParams {
    pub length_m: f64,
    pub inv_gv_signal_ps_per_m: f64,
    pub inv_gv_pump_ps_per_m: f64,
}

impl FiberParams {
    pub fn new(
        length_m: f64,
        inv_gv_signal_ps_per_m: f64,
        inv_gv_pump_ps_per_m: f64,
    ) -> Result<Self> {
        for (name, value) in [
            ("length_m", length_m),
            ("inv_gv_signal_ps_per_m", inv_gv_signal_ps_per_m),
            ("inv_gv_pump_ps_per_m", inv_gv_pump_ps_per_m),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(CoreError::BadParameter { name, value });
            }
        }
        if inv_gv_pump_ps_per_m < inv_gv_signal_ps_per_m {
            return Err(CoreError::WalkoffOrder);
        }
        Ok(Self {
            length_m,
            inv_gv_signal_ps_per_m,
            inv_gv_pump_ps_per_m,
        })
    }

    /// Default dispersion with the given loop length and the stock walkoff
    /// rate of 1.7 ps/m.
    pub fn with_length(length_m: f64) -> Result<Self> {
        Self::with_walkoff_rate(length_m, DEFAULT_WALKOFF_PS_PER_M)
    }

    pub fn with_walkoff_rate(length_m: f64, walkoff_ps_per_m: f64) -> Result<Self> {
        if !(walkoff_ps_per_m.is_finite() && walkoff_ps_per_m >= 0.0) {
            return Err(CoreError::BadParameter {
                name: "walkoff_ps_per_m",
                value: walkoff_ps_per_m,
            });
        }
        Self::new(
            length_m,
            DEFAULT_INV_GV_SIGNAL_PS_PER_M,
            DEFAULT_INV_GV_SIGNAL_PS_PER_M + walkoff_ps_per_m,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkoffBreakdown {
    /// Pump transit time through the loop, ps.
    pub pump_transit_ps: f64,
    /// Distance by which the signal pulls ahead of the pump, m.
    pub pullahead_m: f64,
    /// Net walkoff time tau_s, ps.
    pub walkoff_ps: f64,
}

pub fn walkoff(fiber: &FiberParams) -> WalkoffBreakdown {
    let l = fiber.length_m;
    let bp = fiber.inv_gv_pump_ps_per_m;
    let bs = fiber.inv_gv_signal_ps_per_m;
    WalkoffBreakdown {
        pump_transit_ps: l * bp,
        pullahead_m: l * (bp - bs) / bs,
        walkoff_ps: l * (bp - bs),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Walkoff shorter than the pump width: window follows the pump shape.
    Matched,
    /// Walkoff equal to the pump width.
    Critical,
    /// Walkoff beyond the pump width: flat-topped window of width
    /// tau_s - tau_p between full rise and start of fall.
    Walkthrough,
}

/// Classify by comparing the walkoff time against the pump FWHM with a
/// relative tolerance of 1e-6.
pub fn regime(walkoff_ps: f64, pump_fwhm_ps: f64) -> Regime {
    let tol = 1e-6 * pump_fwhm_ps.max(1.0);
    if (walkoff_ps - pump_fwhm_ps).abs() <= tol {
        Regime::Critical
    } else if walkoff_ps < pump_fwhm_ps {
        Regime::Matched
    } else {
        Regime::Walkthrough
    }
}
