//! Density matrices for one- and two-photon polarization states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::quantum::jones::JonesOperator;
use crate::quantum::ket::PolarizationKet;

pub const HERMITICITY_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-9;
pub const EIGENVALUE_TOL: f64 = -1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates shape (2x2 or 4x4), Hermiticity, unit trace, and positivity
    /// (eigenvalues >= -1e-9).
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let (r, c) = entries.shape();
        if r != c || (r != 2 && r != 4) {
            return Err(CoreError::DimensionMismatch { expected: 4, got: r });
        }
        let herm_dev = (&entries - entries.adjoint())
            .iter()
            .map(|e| e.norm())
            .fold(0.0, f64::max);
        if !herm_dev.is_finite() || herm_dev > HERMITICITY_TOL {
            return Err(CoreError::NotHermitian {
                deviation: herm_dev,
            });
        }
        let trace = entries.trace();
        let trace_dev = (trace.re - 1.0).hypot(trace.im);
        if trace_dev > TRACE_TOL {
            return Err(CoreError::BadTrace {
                deviation: trace_dev,
            });
        }
        let eigs = hermitian_eigenvalues(&entries);
        if let Some(min) = eigs.iter().cloned().reduce(f64::min) {
            if min < EIGENVALUE_TOL {
                return Err(CoreError::NotPositive { eigenvalue: min });
            }
        }
        Ok(Self { entries })
    }

    pub fn from_pure(ket: &PolarizationKet) -> Self {
        let v = ket.amplitudes();
        let entries = v * v.adjoint();
        Self { entries }
    }

    /// Convex mixture of pure states. Weights must be non-negative with a
    /// positive sum; they are renormalized to one.
    pub fn mixture(components: &[(f64, PolarizationKet)]) -> Result<Self> {
        if components.is_empty() {
            return Err(CoreError::ZeroModeWeight);
        }
        let dim = components[0].1.dim();
        let total: f64 = components.iter().map(|(w, _)| *w).sum();
        if !(total.is_finite() && total > 0.0)
            || components.iter().any(|(w, _)| *w < 0.0 || !w.is_finite())
        {
            return Err(CoreError::BadParameter {
                name: "mixture_weight",
                value: total,
            });
        }
        let mut entries = DMatrix::<Complex64>::zeros(dim, dim);
        for (w, ket) in components {
            if ket.dim() != dim {
                return Err(CoreError::DimensionMismatch {
                    expected: dim,
                    got: ket.dim(),
                });
            }
            let v = ket.amplitudes();
            entries += (v * v.adjoint()).scale(*w / total);
        }
        Ok(Self { entries })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(CoreError::DimensionMismatch {
                expected: 4,
                got: dim,
            });
        }
        let entries = DMatrix::<Complex64>::identity(dim, dim).scale(1.0 / dim as f64);
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// Tr(rho^2); 1 for pure states, 1/dim for the maximally mixed state.
    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    /// (1-x) rho + x I/dim.
    pub fn depolarized(&self, x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(CoreError::BadParameter {
                name: "depolarizing_fraction",
                value: x,
            });
        }
        let dim = self.dim();
        let entries = self.entries.clone().scale(1.0 - x)
            + DMatrix::<Complex64>::identity(dim, dim).scale(x / dim as f64);
        Ok(Self { entries })
    }

    /// Convex combination of validated density matrices.
    pub fn blend(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(CoreError::ZeroModeWeight);
        }
        let dim = parts[0].1.dim();
        let total: f64 = parts.iter().map(|(w, _)| *w).sum();
        if !(total.is_finite() && total > 0.0) || parts.iter().any(|(w, _)| *w < 0.0) {
            return Err(CoreError::BadParameter {
                name: "blend_weight",
                value: total,
            });
        }
        let mut entries = DMatrix::<Complex64>::zeros(dim, dim);
        for (w, rho) in parts {
            if rho.dim() != dim {
                return Err(CoreError::DimensionMismatch {
                    expected: dim,
                    got: rho.dim(),
                });
            }
            entries += rho.entries.clone().scale(*w / total);
        }
        Ok(Self { entries })
    }
}

/// Eigenvalues of a Hermitian matrix, unordered.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    m.clone().symmetric_eigen().eigenvalues.iter().cloned().collect()
}

/// Hermitian square root with negative eigenvalues clamped to zero.
pub fn hermitian_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = m.clone().symmetric_eigen();
    let roots = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues
            .iter()
            .map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0)),
    );
    &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint()
}

/// Conjugate a two-photon state by local unitaries: (Us ⊗ Ui) rho (Us ⊗ Ui)^dag.
pub fn apply_local(
    u_signal: &JonesOperator,
    u_idler: &JonesOperator,
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(CoreError::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let big = kron2(u_signal.matrix(), u_idler.matrix());
    let entries = &big * rho.entries() * big.adjoint();
    Ok(DensityMatrix { entries })
}

/// Kronecker product of two 2x2 operators into the |HH>,|HV>,|VH>,|VV> basis.
pub fn kron2(
    a: &nalgebra::Matrix2<Complex64>,
    b: &nalgebra::Matrix2<Complex64>,
) -> DMatrix<Complex64> {
    let mut out = DMatrix::<Complex64>::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// <psi| rho |psi>, clamped into [0, 1].
pub fn fidelity_to_pure(psi: &PolarizationKet, rho: &DensityMatrix) -> Result<f64> {
    if psi.dim() != rho.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: rho.dim(),
            got: psi.dim(),
        });
    }
    let v = psi.amplitudes();
    let val = (v.adjoint() * rho.entries() * v)[(0, 0)];
    debug_assert!(val.im.abs() < 1e-9);
    Ok(val.re.clamp(0.0, 1.0))
}

/// Normalized linear entropy d/(d-1) (1 - Tr rho^2): 0 for pure states, 1 for
/// the maximally mixed state.
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    let d = rho.dim() as f64;
    let s = d / (d - 1.0) * (1.0 - rho.purity());
    s.clamp(0.0, 1.0)
}

/// (1/2) * trace norm of (a - b).
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let diff = a.entries() - b.entries();
    Ok(0.5 * hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum::<f64>())
}
