//! Polarization state vectors.
//!
//! Single-photon states live in the {|H>, |V>} basis; photon-pair states in
//! the product basis ordered |HH>, |HV>, |VH>, |VV> (signal slot first).

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{CoreError, Result};

pub const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellKind {
    /// (|HH> + |VV>)/sqrt(2)
    PhiPlus,
    /// (|HH> - |VV>)/sqrt(2)
    PhiMinus,
    /// (|HV> + |VH>)/sqrt(2)
    PsiPlus,
    /// (|HV> - |VH>)/sqrt(2)
    PsiMinus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationKet {
    amplitudes: DVector<Complex64>,
}

impl PolarizationKet {
    /// Validates dimension (2 or 4), finiteness, and unit norm.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim != 2 && dim != 4 {
            return Err(CoreError::DimensionMismatch {
                expected: 2,
                got: dim,
            });
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(CoreError::NotNormalized { deviation: f64::NAN });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let deviation = (norm_sq.sqrt() - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(CoreError::NotNormalized { deviation });
        }
        Ok(Self {
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    /// Rescales the amplitudes to unit norm before validating.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(CoreError::NotNormalized { deviation: f64::NAN });
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize) -> Complex64 {
        self.amplitudes[i]
    }

    /// <self|other>
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn ket_h() -> PolarizationKet {
    PolarizationKet::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap()
}

pub fn ket_v() -> PolarizationKet {
    PolarizationKet::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap()
}

/// (|H> + |V>)/sqrt(2)
pub fn ket_d() -> PolarizationKet {
    PolarizationKet::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap()
}

/// (|H> - |V>)/sqrt(2)
pub fn ket_a() -> PolarizationKet {
    PolarizationKet::normalized(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap()
}

/// (|H> - i|V>)/sqrt(2)
pub fn ket_r() -> PolarizationKet {
    PolarizationKet::normalized(vec![c(1.0, 0.0), c(0.0, -1.0)]).unwrap()
}

/// (|H> + i|V>)/sqrt(2)
pub fn ket_l() -> PolarizationKet {
    PolarizationKet::normalized(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap()
}

pub fn bell_state(kind: BellKind) -> PolarizationKet {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let amps = match kind {
        BellKind::PhiPlus => vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)],
        BellKind::PhiMinus => vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-s, 0.0)],
        BellKind::PsiPlus => vec![c(0.0, 0.0), c(s, 0.0), c(s, 0.0), c(0.0, 0.0)],
        BellKind::PsiMinus => vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)],
    };
    PolarizationKet::new(amps).unwrap()
}

pub const BELL_KINDS: [BellKind; 4] = [
    BellKind::PhiPlus,
    BellKind::PhiMinus,
    BellKind::PsiPlus,
    BellKind::PsiMinus,
];

/// Kronecker product, signal slot first: basis order |HH>, |HV>, |VH>, |VV>.
pub fn tensor(signal: &PolarizationKet, idler: &PolarizationKet) -> Result<PolarizationKet> {
    if signal.dim() != 2 || idler.dim() != 2 {
        return Err(CoreError::DimensionMismatch {
            expected: 2,
            got: signal.dim().max(idler.dim()),
        });
    }
    let mut amps = Vec::with_capacity(4);
    for i in 0..2 {
        for j in 0..2 {
            amps.push(signal.amplitude(i) * idler.amplitude(j));
        }
    }
    PolarizationKet::new(amps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_states_are_orthonormal() {
        for (i, a) in BELL_KINDS.iter().enumerate() {
            for (j, b) in BELL_KINDS.iter().enumerate() {
                let ip = bell_state(*a).inner(&bell_state(*b));
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip.norm() - expect).abs() < 1e-12, "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn tensor_of_diagonal_states() {
        // |D> tensor |D> = (1/2)(|HH> + |HV> + |VH> + |VV>)
        let dd = tensor(&ket_d(), &ket_d()).unwrap();
        for i in 0..4 {
            let a = dd.amplitude(i);
            assert!((a.re - 0.5).abs() < 1e-12 && a.im.abs() < 1e-12);
        }
    }

    #[test]
    fn tensor_preserves_norm() {
        let t = tensor(&ket_l(), &ket_a()).unwrap();
        let n: f64 = (0..4).map(|i| t.amplitude(i).norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_rejects_pair_inputs() {
        let pair = bell_state(BellKind::PhiPlus);
        assert!(tensor(&pair, &ket_h()).is_err());
    }

    #[test]
    fn mutually_unbiased_overlaps() {
        // |<D|R>|^2 = |<D|H>|^2 = |<R|H>|^2 = 1/2
        for (a, b) in [
            (ket_d(), ket_r()),
            (ket_d(), ket_h()),
            (ket_r(), ket_h()),
            (ket_l(), ket_a()),
        ] {
            assert!((a.inner(&b).norm_sqr() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_unnormalized_and_bad_dims() {
        assert!(PolarizationKet::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(PolarizationKet::new(vec![c(1.0, 0.0); 3]).is_err());
        assert!(PolarizationKet::new(vec![c(f64::INFINITY, 0.0), c(0.0, 0.0)]).is_err());
    }
}
