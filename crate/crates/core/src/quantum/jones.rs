//! Unitary polarization operators (Jones matrices).

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::quantum::ket::PolarizationKet;

pub const UNITARITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct JonesOperator {
    matrix: Matrix2<Complex64>,
}

impl JonesOperator {
    /// Validates unitarity: max entry of |U U^dag - I| must be <= 1e-9.
    pub fn new(matrix: Matrix2<Complex64>) -> Result<Self> {
        let dev = (matrix * matrix.adjoint() - Matrix2::identity())
            .iter()
            .map(|e| e.norm())
            .fold(0.0, f64::max);
        if !dev.is_finite() || dev > UNITARITY_TOL {
            return Err(CoreError::NotUnitary { deviation: dev });
        }
        Ok(Self { matrix })
    }

    pub fn identity() -> Self {
        Self {
            matrix: Matrix2::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        Self {
            matrix: self.matrix * rhs.matrix,
        }
    }

    pub fn apply(&self, ket: &PolarizationKet) -> Result<PolarizationKet> {
        if ket.dim() != 2 {
            return Err(CoreError::DimensionMismatch {
                expected: 2,
                got: ket.dim(),
            });
        }
        let a = self.matrix[(0, 0)] * ket.amplitude(0) + self.matrix[(0, 1)] * ket.amplitude(1);
        let b = self.matrix[(1, 0)] * ket.amplitude(0) + self.matrix[(1, 1)] * ket.amplitude(1);
        PolarizationKet::new(vec![a, b])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    #[test]
    fn rejects_non_unitary() {
        let m = Matrix2::new(
            C::new(1.0, 0.0),
            C::new(0.0, 0.0),
            C::new(0.0, 0.0),
            C::new(0.5, 0.0),
        );
        assert!(JonesOperator::new(m).is_err());
    }

    #[test]
    fn apply_preserves_norm() {
        let phase = Matrix2::new(
            C::new(0.0, 1.0),
            C::new(0.0, 0.0),
            C::new(0.0, 0.0),
            C::new(1.0, 0.0),
        );
        let u = JonesOperator::new(phase).unwrap();
        let out = u.apply(&crate::quantum::ket::ket_d()).unwrap();
        let n: f64 = (0..2).map(|i| out.amplitude(i).norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-12);
    }
}
