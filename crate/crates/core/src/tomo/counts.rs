//! Coincidence counting with detector noise and accidental subtraction.
//!
//! Per gate and per arm, a detector fires with probability
//! (pair yield) * (arm efficiency) * (analyzer pass probability) plus the
//! dark and background floor. Coincidences carry the true pair term plus
//! an accidental floor equal to the product of the single-arm rates; the
//! pulsed-source estimator singles_s * singles_i / n_pulses removes that
//! floor without bias, which is what makes the corrected counts fit for
//! reconstruction.

use rand_distr::{Distribution, Poisson};

use crate::error::{CoreError, Result};
use crate::quantum::{fidelity_to_pure, ket_h, ket_v, tensor, DensityMatrix, PolarizationKet};
use crate::rng::SimRng;
use crate::tomo::settings::AnalyzerSetting;

/// Detector chain parameters shared by both arms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    pub dark_prob_per_gate: f64,
    pub background_prob_per_gate: f64,
    pub efficiency_signal: f64,
    pub efficiency_idler: f64,
}

impl NoiseParams {
    pub fn new(
        dark_prob_per_gate: f64,
        background_prob_per_gate: f64,
        efficiency_signal: f64,
        efficiency_idler: f64,
    ) -> Result<Self> {
        for (name, value) in [
            ("dark_prob_per_gate", dark_prob_per_gate),
            ("background_prob_per_gate", background_prob_per_gate),
        ] {
            if !(value.is_finite() && (0.0..1.0).contains(&value)) {
                return Err(CoreError::BadParameter { name, value });
            }
        }
        for (name, value) in [
            ("efficiency_signal", efficiency_signal),
            ("efficiency_idler", efficiency_idler),
        ] {
            if !(value.is_finite() && value > 0.0 && value <= 1.0) {
                return Err(CoreError::BadParameter { name, value });
            }
        }
        Ok(Self {
            dark_prob_per_gate,
            background_prob_per_gate,
            efficiency_signal,
            efficiency_idler,
        })
    }

    /// Noiseless unit-efficiency chain.
    pub fn ideal() -> Self {
        Self {
            dark_prob_per_gate: 0.0,
            background_prob_per_gate: 0.0,
            efficiency_signal: 1.0,
            efficiency_idler: 1.0,
        }
    }

    /// Combined uncorrelated-noise probability per gate on one arm.
    pub fn floor_per_gate(&self) -> f64 {
        let keep = (1.0 - self.dark_prob_per_gate) * (1.0 - self.background_prob_per_gate);
        1.0 - keep
    }
}

/// Counts observed at one analyzer setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountRecord {
    pub setting_id: usize,
    pub n_pulses: u64,
    pub coincidences_raw: u64,
    pub singles_signal: u64,
    pub singles_idler: u64,
    pub accidentals_est: f64,
    pub coincidences_corrected: f64,
}

/// Probability that one arm's analyzer passes its photon, tracing out the
/// other arm.
fn arm_pass_prob(rho: &DensityMatrix, arm_ket: &PolarizationKet, signal_arm: bool) -> Result<f64> {
    let mut p = 0.0;
    for other in [ket_h(), ket_v()] {
        let pair = if signal_arm {
            tensor(arm_ket, &other)?
        } else {
            tensor(&other, arm_ket)?
        };
        p += fidelity_to_pure(&pair, rho)?;
    }
    Ok(p.clamp(0.0, 1.0))
}

pub(crate) fn poisson_draw(mean: f64, rng: &mut SimRng) -> Result<u64> {
    if mean < 0.0 || !mean.is_finite() {
        return Err(CoreError::BadParameter {
            name: "poisson_mean",
            value: mean,
        });
    }
    if mean == 0.0 {
        return Ok(0);
    }
    let poisson = Poisson::new(mean).map_err(|_| CoreError::BadParameter {
        name: "poisson_mean",
        value: mean,
    })?;
    Ok(poisson.sample(rng) as u64)
}

/// Expected per-setting rates, exposed for calibration and exact oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedRates {
    /// Mean coincidences per gate, including the accidental floor.
    pub coincidence_per_gate: f64,
    /// Mean true-pair coincidences per gate (no accidentals).
    pub pair_per_gate: f64,
    pub singles_signal_per_gate: f64,
    pub singles_idler_per_gate: f64,
}

/// Noise-free expectation values behind `simulate_counts`.
pub fn expected_rates(
    rho: &DensityMatrix,
    setting: &AnalyzerSetting,
    pair_prob: f64,
    noise: &NoiseParams,
) -> Result<ExpectedRates> {
    if !(pair_prob.is_finite() && (0.0..1.0).contains(&pair_prob)) {
        return Err(CoreError::BadParameter {
            name: "pair_prob",
            value: pair_prob,
        });
    }
    let q = fidelity_to_pure(&setting.pair_ket(), rho)?;
    let m_s = arm_pass_prob(rho, &setting.signal_ket(), true)?;
    let m_i = arm_pass_prob(rho, &setting.idler_ket(), false)?;
    let c_s = pair_prob * noise.efficiency_signal * m_s + noise.floor_per_gate();
    let c_i = pair_prob * noise.efficiency_idler * m_i + noise.floor_per_gate();
    let pair = pair_prob * noise.efficiency_signal * noise.efficiency_idler * q;
    Ok(ExpectedRates {
        coincidence_per_gate: pair + c_s * c_i,
        pair_per_gate: pair,
        singles_signal_per_gate: c_s,
        singles_idler_per_gate: c_i,
    })
}

/// Simulate one tomography acquisition: Poisson counts per setting, with
/// accidentals already estimated from the sampled singles and subtracted.
pub fn simulate_counts(
    rho: &DensityMatrix,
    settings: &[AnalyzerSetting],
    n_pulses: u64,
    pair_prob: f64,
    noise: &NoiseParams,
    rng: &mut SimRng,
) -> Result<Vec<CountRecord>> {
    if n_pulses == 0 {
        return Err(CoreError::BadCountRecords {
            context: "n_pulses must be positive",
        });
    }
    let n = n_pulses as f64;
    let mut records = Vec::with_capacity(settings.len());
    for (setting_id, setting) in settings.iter().enumerate() {
        let rates = expected_rates(rho, setting, pair_prob, noise)?;
        let raw = poisson_draw(n * rates.coincidence_per_gate, rng)?;
        let singles_signal = poisson_draw(n * rates.singles_signal_per_gate, rng)?;
        let singles_idler = poisson_draw(n * rates.singles_idler_per_gate, rng)?;
        records.push(subtract_accidentals(&CountRecord {
            setting_id,
            n_pulses,
            coincidences_raw: raw,
            singles_signal,
            singles_idler,
            accidentals_est: 0.0,
            coincidences_corrected: 0.0,
        })?);
    }
    Ok(records)
}

/// Pulsed-source accidental estimate: singles product over the pulse
/// count. Corrected counts may go slightly negative; downstream fits
/// handle that, clamping would bias them.
pub fn subtract_accidentals(record: &CountRecord) -> Result<CountRecord> {
    if record.n_pulses == 0 {
        return Err(CoreError::BadCountRecords {
            context: "n_pulses must be positive",
        });
    }
    let est =
        record.singles_signal as f64 * record.singles_idler as f64 / record.n_pulses as f64;
    Ok(CountRecord {
        accidentals_est: est,
        coincidences_corrected: record.coincidences_raw as f64 - est,
        ..*record
    })
}
