//! Entanglement measures for two-photon states.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::optimize::nelder_mead;
use crate::quantum::density::{hermitian_sqrt, linear_entropy, DensityMatrix};

/// Headline state metrics reported by tomography runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementMetrics {
    /// Fidelity to the nearest maximally entangled state.
    pub fidelity_max: f64,
    /// Squared concurrence.
    pub tangle: f64,
    /// Normalized linear entropy.
    pub linear_entropy: f64,
}

pub fn entanglement_metrics(rho: &DensityMatrix) -> Result<EntanglementMetrics> {
    Ok(EntanglementMetrics {
        fidelity_max: fully_entangled_fraction(rho)?,
        tangle: tangle(rho)?,
        linear_entropy: linear_entropy(rho),
    })
}

/// Spin-flipped state (sigma_y ⊗ sigma_y) rho* (sigma_y ⊗ sigma_y).
fn spin_flip(rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    // (YY)[i][a] = s_i delta_{a, 3-i} with s = (-1, 1, 1, -1), so the
    // conjugation reduces to an index reversal with sign pattern s_i * s_j.
    const S: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    let mut out = DMatrix::<Complex64>::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            out[(i, j)] = rho[(3 - i, 3 - j)].conj() * (S[i] * S[j]);
        }
    }
    out
}

/// Squared concurrence. Concurrence is max(0, l1 - l2 - l3 - l4) where l_k
/// are the decreasing square roots of the eigenvalues of rho * rho_tilde,
/// computed here through the Hermitian form sqrt(rho) rho_tilde sqrt(rho).
pub fn tangle(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(CoreError::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let flipped = spin_flip(rho.entries());
    let root = hermitian_sqrt(rho.entries());
    let m = &root * flipped * &root;
    let mut lambdas: Vec<f64> = m
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let c = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    Ok((c * c).clamp(0.0, 1.0))
}

/// SU(2) element from three angles: [[cos t e^{ia}, sin t e^{ib}],
/// [-sin t e^{-ib}, cos t e^{-ia}]]. Covers every single-qubit unitary up to
/// global phase, which the overlap below is insensitive to.
fn su2(theta: f64, alpha: f64, beta: f64) -> [Complex64; 4] {
    let (ct, st) = (theta.cos(), theta.sin());
    [
        Complex64::from_polar(ct, alpha),
        Complex64::from_polar(st, beta),
        -Complex64::from_polar(st, -beta),
        Complex64::from_polar(ct, -alpha),
    ]
}

/// <e| rho |e> for |e> = (I ⊗ U) |Phi+>, whose amplitudes in the
/// |HH>,|HV>,|VH>,|VV> basis are (u00, u10, u01, u11)/sqrt(2).
fn max_entangled_overlap(rho: &DMatrix<Complex64>, u: &[Complex64; 4]) -> f64 {
    let e = [u[0], u[2], u[1], u[3]];
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            acc += e[i].conj() * rho[(i, j)] * e[j];
        }
    }
    acc.re * 0.5
}

/// Maximum overlap with any maximally entangled two-qubit state, computed by
/// a 16^3 coarse grid over the three SU(2) angles followed by Nelder-Mead
/// refinement from the best grid points.
pub fn fully_entangled_fraction(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(CoreError::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let m = rho.entries();
    let objective = |p: &[f64]| -max_entangled_overlap(m, &su2(p[0], p[1], p[2]));

    const N: usize = 16;
    let theta_step = std::f64::consts::FRAC_PI_2 / (N - 1) as f64;
    let angle_step = std::f64::consts::TAU / N as f64;
    // keep the best few coarse points as refinement seeds
    let mut seeds: Vec<(f64, [f64; 3])> = Vec::new();
    for it in 0..N {
        let theta = it as f64 * theta_step;
        for ia in 0..N {
            let alpha = ia as f64 * angle_step;
            for ib in 0..N {
                let beta = ib as f64 * angle_step;
                let v = objective(&[theta, alpha, beta]);
                if seeds.len() < 3 {
                    seeds.push((v, [theta, alpha, beta]));
                    seeds.sort_by(|a, b| a.0.total_cmp(&b.0));
                } else if v < seeds[2].0 {
                    seeds[2] = (v, [theta, alpha, beta]);
                    seeds.sort_by(|a, b| a.0.total_cmp(&b.0));
                }
            }
        }
    }

    let mut best = seeds[0].0;
    for (_, seed) in &seeds {
        let r = nelder_mead(
            objective,
            seed,
            &[theta_step * 0.5, angle_step * 0.5, angle_step * 0.5],
            1e-12,
            400,
        );
        if r.value < best {
            best = r.value;
        }
    }
    Ok((-best).clamp(0.0, 1.0))
}
