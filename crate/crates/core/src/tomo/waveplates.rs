//! Waveplate Jones operators.
//!
//! Fast axis at angle theta from horizontal, slow axis retarded by the
//! plate's phase: U(theta) = R(theta) diag(1, e^{-i Gamma}) R(-theta) with
//! R the standard rotation [[c, -s], [s, c]]. Gamma = pi/2 for a quarter
//! plate and pi for a half plate. Global phase is fixed by the leading 1
//! in the retarder diagonal; with this convention a quarter plate at 45
//! degrees maps H to (H + iV)/sqrt(2) and a half plate at 22.5 degrees
//! maps H to D.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::quantum::JonesOperator;

fn retarder(theta_deg: f64, retardance: Complex64) -> JonesOperator {
    let theta = theta_deg.to_radians();
    let (s, c) = (
        Complex64::new(theta.sin(), 0.0),
        Complex64::new(theta.cos(), 0.0),
    );
    let one = Complex64::new(1.0, 0.0);
    let rot = Matrix2::new(c, -s, s, c);
    let rot_back = Matrix2::new(c, s, -s, c);
    let diag = Matrix2::new(one, Complex64::ZERO, Complex64::ZERO, retardance);
    JonesOperator::new(rot * diag * rot_back).expect("retarder construction is unitary")
}

/// Quarter-wave plate with fast axis at `theta_deg` from horizontal.
pub fn jones_qwp(theta_deg: f64) -> JonesOperator {
    retarder(theta_deg, Complex64::new(0.0, -1.0))
}

/// Half-wave plate with fast axis at `theta_deg` from horizontal.
pub fn jones_hwp(theta_deg: f64) -> JonesOperator {
    retarder(theta_deg, Complex64::new(-1.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{ket_a, ket_d, ket_h, ket_l, ket_v};

    fn overlap(a: &crate::quantum::PolarizationKet, b: &crate::quantum::PolarizationKet) -> f64 {
        a.inner(b).norm()
    }

    #[test]
    fn hwp_at_zero_flips_v_phase() {
        let u = jones_hwp(0.0);
        let m = u.matrix();
        assert!((m[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((m[(1, 1)] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!(m[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn hwp_at_22p5_maps_h_to_d() {
        let out = jones_hwp(22.5).apply(&ket_h()).unwrap();
        assert!((overlap(&out, &ket_d()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hwp_at_45_swaps_h_and_v() {
        let out = jones_hwp(45.0).apply(&ket_h()).unwrap();
        assert!((overlap(&out, &ket_v()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qwp_at_45_maps_h_to_l() {
        // L = (H + iV)/sqrt2 in this convention.
        let out = jones_qwp(45.0).apply(&ket_h()).unwrap();
        assert!((overlap(&out, &ket_l()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qwp_at_zero_fixes_h_and_v() {
        let u = jones_qwp(0.0);
        let h = u.apply(&ket_h()).unwrap();
        let v = u.apply(&ket_v()).unwrap();
        assert!((overlap(&h, &ket_h()) - 1.0).abs() < 1e-12);
        assert!((overlap(&v, &ket_v()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qwp_twice_acts_as_hwp() {
        let q = jones_qwp(30.0);
        let twice = q.compose(&q);
        let h = jones_hwp(30.0);
        let out_a = twice.apply(&ket_a()).unwrap();
        let out_b = h.apply(&ket_a()).unwrap();
        assert!((overlap(&out_a, &out_b) - 1.0).abs() < 1e-12);
    }
}
