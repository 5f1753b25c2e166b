//! Parametric bootstrap for reconstruction uncertainties.
//!
//! Each resample redraws the raw coincidences and both singles streams
//! from Poisson distributions centered on the observed counts, redoes the
//! accidental subtraction, and refits the state starting from the base
//! solution. The reported uncertainty per metric is the sample standard
//! deviation across converged resamples.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::quantum::entanglement_metrics;
use crate::rng::SimRng;
use crate::tomo::counts::{poisson_draw, subtract_accidentals, CountRecord};
use crate::tomo::mle::{
    factor_to_params, fit_from_start, lower_factor, mle_reconstruct, params_to_factor, prepare,
    MetricUncertainties, ReconstructionResult,
};
use crate::tomo::settings::AnalyzerSetting;

/// Fraction of failed resamples above which the bootstrap is rejected.
const MAX_FAILURE_FRACTION: f64 = 0.1;

fn resample_record(record: &CountRecord, rng: &mut SimRng) -> Result<CountRecord> {
    let redrawn = CountRecord {
        coincidences_raw: poisson_draw(record.coincidences_raw as f64, rng)?,
        singles_signal: poisson_draw(record.singles_signal as f64, rng)?,
        singles_idler: poisson_draw(record.singles_idler as f64, rng)?,
        ..*record
    };
    subtract_accidentals(&redrawn)
}

fn sample_std(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (ss / (n - 1) as f64).sqrt()
}

/// Reconstruct the state and attach bootstrap uncertainties for the
/// fidelity, tangle, and linear entropy. With `n_resamples = 0` this is
/// `mle_reconstruct` with zero uncertainties.
pub fn uncertainties_mc(
    records: &[CountRecord],
    settings: &[AnalyzerSetting],
    n_resamples: usize,
    rng: &mut SimRng,
) -> Result<ReconstructionResult> {
    let base = mle_reconstruct(records, settings)?;
    if n_resamples == 0 {
        return Ok(base);
    }

    // Warm-start parameters from the fitted (unnormalized) state.
    let s_base = base.rho.entries().scale(base.normalization);
    let warm = factor_to_params(&lower_factor(&s_base, base.normalization)?);

    let mut fidelities = Vec::with_capacity(n_resamples);
    let mut tangles = Vec::with_capacity(n_resamples);
    let mut entropies = Vec::with_capacity(n_resamples);
    let mut failed = 0usize;
    for _ in 0..n_resamples {
        let resampled: Vec<CountRecord> = records
            .iter()
            .map(|r| resample_record(r, rng))
            .collect::<Result<_>>()?;
        let fit = prepare(&resampled, settings)?;
        let result = match fit_from_start(&fit, &warm) {
            Ok(r) => r,
            Err(_) => {
                failed += 1;
                continue;
            }
        };
        let m = params_to_factor(&result.x);
        let s = m.adjoint() * &m;
        let trace = s.trace().re;
        if !(trace.is_finite() && trace > 0.0) {
            failed += 1;
            continue;
        }
        let rho = match crate::quantum::DensityMatrix::new(
            s * Complex64::new(1.0 / trace, 0.0),
        ) {
            Ok(r) => r,
            Err(_) => {
                failed += 1;
                continue;
            }
        };
        match entanglement_metrics(&rho) {
            Ok(metrics) => {
                fidelities.push(metrics.fidelity_max);
                tangles.push(metrics.tangle);
                entropies.push(metrics.linear_entropy);
            }
            Err(_) => failed += 1,
        }
    }

    if (failed as f64) > MAX_FAILURE_FRACTION * n_resamples as f64 {
        return Err(CoreError::BootstrapUnstable {
            failed,
            total: n_resamples,
        });
    }

    Ok(ReconstructionResult {
        metric_uncertainties: MetricUncertainties {
            fidelity_max: sample_std(&fidelities),
            tangle: sample_std(&tangles),
            linear_entropy: sample_std(&entropies),
        },
        n_resamples,
        ..base
    })
}
