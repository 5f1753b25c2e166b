//! Maximum-likelihood density-matrix reconstruction.
//!
//! The state is parameterized through a lower-triangular factor,
//! S = M^dag M, so every iterate is Hermitian and positive by
//! construction; the trace of S doubles as the fitted normalization, so
//! no separate scale parameter is needed. The objective is the
//! Gaussian-approximated Poisson likelihood
//!
//!   sum_nu (mu_nu - n_nu)^2 / (2 max(mu_nu, 0.5))
//!
//! over corrected coincidence counts n_nu (possibly slightly negative
//! after accidental subtraction; they enter as-is). Optimization is
//! multi-start Levenberg-Marquardt seeded by linear inversion, and
//! non-convergence is an error, never a silent result.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::optimize::{levenberg_marquardt, LmResult};
use crate::quantum::{entanglement_metrics, DensityMatrix, EntanglementMetrics};
use crate::tomo::counts::CountRecord;
use crate::tomo::settings::AnalyzerSetting;

/// Objective floor for near-zero predictions, in counts.
const COUNT_FLOOR: f64 = 0.5;
/// Absolute convergence tolerance on the objective decrease.
const OBJECTIVE_TOL: f64 = 1e-10;
/// Iteration cap per start.
const MAX_ITERATIONS: usize = 2_000;

/// Per-metric standard deviations from the parametric bootstrap.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricUncertainties {
    pub fidelity_max: f64,
    pub tangle: f64,
    pub linear_entropy: f64,
}

#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    pub rho: DensityMatrix,
    pub objective_value: f64,
    /// Fitted total-count normalization (trace of the unnormalized S).
    pub normalization: f64,
    pub metrics: EntanglementMetrics,
    pub metric_uncertainties: MetricUncertainties,
    pub n_resamples: usize,
}

/// Lower-triangular parameterization: 4 real diagonal entries, then
/// (re, im) pairs for the 6 sub-diagonal entries in row-major order.
pub(crate) fn params_to_factor(p: &[f64]) -> DMatrix<Complex64> {
    debug_assert_eq!(p.len(), 16);
    let mut m = DMatrix::<Complex64>::zeros(4, 4);
    for d in 0..4 {
        m[(d, d)] = Complex64::new(p[d], 0.0);
    }
    let order = [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)];
    for (k, (i, j)) in order.into_iter().enumerate() {
        m[(i, j)] = Complex64::new(p[4 + 2 * k], p[5 + 2 * k]);
    }
    m
}

pub(crate) fn factor_to_params(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut p = vec![0.0; 16];
    for d in 0..4 {
        p[d] = m[(d, d)].re;
    }
    let order = [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)];
    for (k, (i, j)) in order.into_iter().enumerate() {
        p[4 + 2 * k] = m[(i, j)].re;
        p[5 + 2 * k] = m[(i, j)].im;
    }
    p
}

/// Predicted counts for every setting: mu_nu = scale_nu * |M psi_nu|^2.
fn predict(m: &DMatrix<Complex64>, kets: &[DVector<Complex64>], scales: &[f64]) -> Vec<f64> {
    kets.iter()
        .zip(scales)
        .map(|(v, s)| (m * v).norm_squared() * s)
        .collect()
}

fn residuals(predicted: &[f64], targets: &[f64]) -> Vec<f64> {
    predicted
        .iter()
        .zip(targets)
        .map(|(&mu, &n)| (mu - n) / (2.0 * mu.max(COUNT_FLOOR)).sqrt())
        .collect()
}

/// Pauli basis of two-qubit space: sigma_i (x) sigma_j, i major.
fn pauli_products() -> Vec<DMatrix<Complex64>> {
    let o = Complex64::ZERO;
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let sigmas = [
        [one, o, o, one],  // I
        [o, one, one, o],  // X
        [o, -i, i, o],     // Y
        [one, o, o, -one], // Z
    ];
    let mut out = Vec::with_capacity(16);
    for a in &sigmas {
        for b in &sigmas {
            let mut m = DMatrix::<Complex64>::zeros(4, 4);
            for r in 0..2 {
                for c in 0..2 {
                    for r2 in 0..2 {
                        for c2 in 0..2 {
                            m[(2 * r + r2, 2 * c + c2)] = a[2 * r + c] * b[2 * r2 + c2];
                        }
                    }
                }
            }
            out.push(m);
        }
    }
    out
}

/// Linear inversion: solve the least-squares Pauli decomposition of the
/// unnormalized state from the corrected counts, then clip to positive.
fn linear_inversion_factor(
    kets: &[DVector<Complex64>],
    scales: &[f64],
    targets: &[f64],
) -> Result<DMatrix<Complex64>> {
    let basis = pauli_products();
    let rows = kets.len();
    let mut a = DMatrix::<f64>::zeros(rows, 16);
    for (nu, (v, s)) in kets.iter().zip(scales).enumerate() {
        for (k, sigma) in basis.iter().enumerate() {
            // Tr(P sigma) = <psi| sigma |psi> for rank-1 P.
            let val = (v.adjoint() * sigma * v)[(0, 0)].re;
            a[(nu, k)] = 0.25 * s * val;
        }
    }
    let svd = a.svd(true, true);
    let max_sv = svd.singular_values.max();
    if svd.singular_values.min() < 1e-9 * max_sv {
        return Err(CoreError::BadCountRecords {
            context: "projector set does not span the state space",
        });
    }
    let b = DVector::from_column_slice(targets);
    let y = svd
        .solve(&b, 1e-12 * max_sv)
        .map_err(|_| CoreError::FitNonConvergence {
            context: "linear inversion failed",
        })?;

    let mut s_lin = DMatrix::<Complex64>::zeros(4, 4);
    for (k, sigma) in basis.iter().enumerate() {
        s_lin += sigma * Complex64::new(0.25 * y[k], 0.0);
    }
    let s_lin = (s_lin.clone() + s_lin.adjoint()) * Complex64::new(0.5, 0.0);

    let scale = s_lin.trace().re.max(targets.iter().sum::<f64>().max(16.0) / 9.0);
    let eig = s_lin.symmetric_eigen();
    let floor = 1e-6 * scale.max(1.0);
    let mut clipped = DMatrix::<Complex64>::zeros(4, 4);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let l = lambda.max(floor);
        let v = eig.eigenvectors.column(k);
        clipped += v * v.adjoint() * Complex64::new(l, 0.0);
    }
    lower_factor(&clipped, scale.max(1.0))
}

/// Factor a positive matrix as S = M^dag M with M *lower* triangular
/// (real diagonal), matching the fit parameterization. Cholesky gives
/// S = L L^dag with L lower; conjugating by the exchange permutation
/// turns that into the required orientation.
pub(crate) fn lower_factor(s: &DMatrix<Complex64>, scale: f64) -> Result<DMatrix<Complex64>> {
    let n = s.nrows();
    let flip = |m: &DMatrix<Complex64>| {
        DMatrix::from_fn(n, n, |i, j| m[(n - 1 - i, n - 1 - j)])
    };
    let mut jitter = 0.0;
    for _ in 0..4 {
        let candidate = s + DMatrix::<Complex64>::identity(n, n) * Complex64::new(jitter, 0.0);
        if let Some(chol) = nalgebra::Cholesky::new(flip(&candidate)) {
            // flip(S) = L L^dag  =>  S = U U^dag with U = flip(L) upper,
            // so M = U^dag is lower and M^dag M = S.
            return Ok(flip(&chol.l()).adjoint());
        }
        jitter = (jitter * 10.0).max(1e-9 * scale);
    }
    Err(CoreError::FitNonConvergence {
        context: "linear-inversion seed could not be factored",
    })
}

fn run_start(
    start: &[f64],
    kets: &[DVector<Complex64>],
    scales: &[f64],
    targets: &[f64],
) -> LmResult {
    levenberg_marquardt(
        |p| {
            let m = params_to_factor(p);
            residuals(&predict(&m, kets, scales), targets)
        },
        start,
        OBJECTIVE_TOL,
        MAX_ITERATIONS,
    )
}

pub(crate) struct PreparedFit {
    pub kets: Vec<DVector<Complex64>>,
    pub scales: Vec<f64>,
    pub targets: Vec<f64>,
}

pub(crate) fn prepare(
    records: &[CountRecord],
    settings: &[AnalyzerSetting],
) -> Result<PreparedFit> {
    if records.len() != settings.len() {
        return Err(CoreError::BadCountRecords {
            context: "records and settings differ in length",
        });
    }
    if records.len() < 16 {
        return Err(CoreError::BadCountRecords {
            context: "need at least 16 settings to reconstruct a two-qubit state",
        });
    }
    if records.iter().any(|r| r.n_pulses == 0) {
        return Err(CoreError::BadCountRecords {
            context: "n_pulses must be positive",
        });
    }
    let n_max = records.iter().map(|r| r.n_pulses).max().unwrap() as f64;
    let kets: Vec<DVector<Complex64>> = settings
        .iter()
        .map(|s| s.pair_ket().amplitudes().clone())
        .collect();
    let scales: Vec<f64> = records
        .iter()
        .map(|r| r.n_pulses as f64 / n_max)
        .collect();
    let targets: Vec<f64> = records.iter().map(|r| r.coincidences_corrected).collect();
    Ok(PreparedFit {
        kets,
        scales,
        targets,
    })
}

pub(crate) fn finish(
    best: LmResult,
    n_resamples: usize,
    uncertainties: MetricUncertainties,
) -> Result<ReconstructionResult> {
    let m = params_to_factor(&best.x);
    let s = m.adjoint() * &m;
    let trace = s.trace().re;
    if !(trace.is_finite() && trace > 0.0) {
        return Err(CoreError::FitNonConvergence {
            context: "fitted state has non-positive normalization",
        });
    }
    let rho = DensityMatrix::new(s.scale(1.0 / trace))?;
    let metrics = entanglement_metrics(&rho)?;
    Ok(ReconstructionResult {
        rho,
        objective_value: best.cost,
        normalization: trace,
        metrics,
        metric_uncertainties: uncertainties,
        n_resamples,
    })
}

/// Single-start descent from explicit parameters; used for warm-started
/// bootstrap refits.
pub(crate) fn fit_from_start(fit: &PreparedFit, start: &[f64]) -> Result<LmResult> {
    let result = run_start(start, &fit.kets, &fit.scales, &fit.targets);
    if !result.converged {
        return Err(CoreError::FitNonConvergence {
            context: "descent hit the iteration cap while still improving",
        });
    }
    Ok(result)
}

/// Reconstruct a two-qubit state from corrected coincidence counts.
/// Records pair with settings by position.
pub fn mle_reconstruct(
    records: &[CountRecord],
    settings: &[AnalyzerSetting],
) -> Result<ReconstructionResult> {
    let fit = prepare(records, settings)?;

    let seed = linear_inversion_factor(&fit.kets, &fit.scales, &fit.targets)?;
    let start_lin = factor_to_params(&seed);
    let n_est = fit.targets.iter().sum::<f64>().max(16.0) / 9.0;
    let mixed_diag = (n_est / 4.0).sqrt();
    let start_mixed: Vec<f64> = (0..16)
        .map(|j| if j < 4 { mixed_diag } else { 0.0 })
        .collect();
    let start_perturbed: Vec<f64> = start_lin
        .iter()
        .enumerate()
        .map(|(j, &v)| v * (1.0 + 0.05 * if j % 2 == 0 { 1.0 } else { -1.0 }) + 0.01 * mixed_diag)
        .collect();

    let mut best: Option<LmResult> = None;
    for start in [&start_lin, &start_mixed, &start_perturbed] {
        let result = run_start(start, &fit.kets, &fit.scales, &fit.targets);
        if result.converged && best.as_ref().map_or(true, |b| result.cost < b.cost) {
            best = Some(result);
        }
    }
    let best = best.ok_or(CoreError::FitNonConvergence {
        context: "no descent start converged within the iteration cap",
    })?;
    finish(best, 0, MetricUncertainties::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{bell_state, trace_distance, BellKind};
    use crate::rng::rng_from_seed;
    use crate::tomo::counts::{expected_rates, simulate_counts, NoiseParams};
    use crate::tomo::settings::standard_settings;

    fn noiseless_records(rho: &DensityMatrix, n_pulses: u64, pair_prob: f64) -> Vec<CountRecord> {
        let settings = standard_settings();
        settings
            .iter()
            .enumerate()
            .map(|(id, s)| {
                let mu = n_pulses as f64
                    * expected_rates(rho, s, pair_prob, &NoiseParams::ideal())
                        .unwrap()
                        .pair_per_gate;
                CountRecord {
                    setting_id: id,
                    n_pulses,
                    coincidences_raw: mu.round() as u64,
                    singles_signal: 0,
                    singles_idler: 0,
                    accidentals_est: 0.0,
                    coincidences_corrected: mu,
                }
            })
            .collect()
    }

    #[test]
    fn noiseless_bell_state_round_trip() {
        let rho = DensityMatrix::from_pure(&bell_state(BellKind::PhiPlus));
        let records = noiseless_records(&rho, 1_000_000, 0.01);
        let settings = standard_settings();
        let result = mle_reconstruct(&records, &settings).unwrap();
        let dist = trace_distance(&result.rho, &rho).unwrap();
        assert!(dist < 1e-3, "trace distance {dist}");
        assert!((result.metrics.fidelity_max - 1.0).abs() < 1e-3);
        // Noiseless data: objective is numerically zero.
        let total: f64 = records.iter().map(|r| r.coincidences_corrected).sum();
        assert!(result.objective_value < 1e-12 * total);
        // Fitted normalization = counts per complete basis.
        assert!((result.normalization - 10_000.0).abs() < 10.0);
    }

    #[test]
    fn equal_counts_give_the_maximally_mixed_state() {
        let settings = standard_settings();
        let records: Vec<CountRecord> = (0..36)
            .map(|id| CountRecord {
                setting_id: id,
                n_pulses: 1_000_000,
                coincidences_raw: 2500,
                singles_signal: 0,
                singles_idler: 0,
                accidentals_est: 0.0,
                coincidences_corrected: 2500.0,
            })
            .collect();
        let result = mle_reconstruct(&records, &settings).unwrap();
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        let dist = trace_distance(&result.rho, &mixed).unwrap();
        assert!(dist < 1e-3, "trace distance {dist}");
    }

    #[test]
    fn reconstruction_is_permutation_invariant() {
        let rho = DensityMatrix::from_pure(&bell_state(BellKind::PsiPlus))
            .depolarized(0.05)
            .unwrap();
        let settings = standard_settings();
        let noise = NoiseParams::new(1e-6, 2e-6, 0.7, 0.6).unwrap();
        let records =
            simulate_counts(&rho, &settings, 5_000_000, 0.008, &noise, &mut rng_from_seed(9))
                .unwrap();
        let base = mle_reconstruct(&records, &settings).unwrap();
        // Reverse both records and settings together.
        let rev_records: Vec<CountRecord> = records.iter().rev().cloned().collect();
        let rev_settings: Vec<_> = settings.iter().rev().cloned().collect();
        let rev = mle_reconstruct(&rev_records, &rev_settings).unwrap();
        let dist = trace_distance(&base.rho, &rev.rho).unwrap();
        assert!(dist < 1e-6, "permutation moved the fit by {dist}");
    }

    #[test]
    fn noisy_counts_recover_the_state_to_counting_precision() {
        let rho = DensityMatrix::from_pure(&bell_state(BellKind::PhiMinus))
            .depolarized(0.02)
            .unwrap();
        let settings = standard_settings();
        let noise = NoiseParams::new(5e-7, 1e-6, 0.65, 0.6).unwrap();
        let records =
            simulate_counts(&rho, &settings, 10_000_000, 0.01, &noise, &mut rng_from_seed(17))
                .unwrap();
        let result = mle_reconstruct(&records, &settings).unwrap();
        let dist = trace_distance(&result.rho, &rho).unwrap();
        assert!(dist < 0.01, "trace distance {dist}");
        assert!(result.metrics.fidelity_max > 0.97);
    }

    #[test]
    fn too_few_settings_is_an_error() {
        let settings: Vec<_> = standard_settings().into_iter().take(12).collect();
        let records: Vec<CountRecord> = (0..12)
            .map(|id| CountRecord {
                setting_id: id,
                n_pulses: 1000,
                coincidences_raw: 10,
                singles_signal: 0,
                singles_idler: 0,
                accidentals_est: 0.0,
                coincidences_corrected: 10.0,
            })
            .collect();
        assert!(matches!(
            mle_reconstruct(&records, &settings),
            Err(CoreError::BadCountRecords { .. })
        ));
    }

    #[test]
    fn degenerate_projector_set_is_rejected() {
        // 36 copies of the same setting cannot span the state space.
        let one = standard_settings()[0];
        let settings = vec![one; 36];
        let records: Vec<CountRecord> = (0..36)
            .map(|id| CountRecord {
                setting_id: id,
                n_pulses: 1000,
                coincidences_raw: 10,
                singles_signal: 0,
                singles_idler: 0,
                accidentals_est: 0.0,
                coincidences_corrected: 10.0,
            })
            .collect();
        assert!(matches!(
            mle_reconstruct(&records, &settings),
            Err(CoreError::BadCountRecords { .. })
        ));
    }

    #[test]
    fn factor_parameterization_round_trips() {
        let p: Vec<f64> = (0..16).map(|i| 0.3 + 0.1 * i as f64).collect();
        let m = params_to_factor(&p);
        let back = factor_to_params(&m);
        for (a, b) in p.iter().zip(&back) {
            assert!((a - b).abs() < 1e-15);
        }
        // S = M^dag M is positive: all predictions non-negative.
        let settings = standard_settings();
        for s in &settings {
            let v = s.pair_ket().amplitudes().clone();
            assert!((&m * &v).norm_squared() >= 0.0);
        }
    }
}
