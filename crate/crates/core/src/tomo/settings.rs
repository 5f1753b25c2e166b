//! Canonical 36-setting analyzer table.
//!
//! Each arm carries a quarter plate, then a half plate, then a polarizer
//! passing H. The analyzed state is the one the plates map onto H:
//! |psi> = QWP(q)^dag HWP(h)^dag |H>. Six angle pairs realize the three
//! mutually unbiased bases {H,V}, {D,A}, {R,L}; the product grid over both
//! arms gives 36 settings, signal index outer, in the fixed order
//! H, V, D, A, R, L.

use crate::error::{CoreError, Result};
use crate::quantum::{ket_h, tensor, PolarizationKet};
use crate::tomo::waveplates::{jones_hwp, jones_qwp};

/// Analyzer basis labels in canonical order.
pub const BASIS_LABELS: [&str; 6] = ["H", "V", "D", "A", "R", "L"];

/// (qwp_deg, hwp_deg) pairs realizing each basis state, same order.
pub const BASIS_ANGLES_DEG: [(f64, f64); 6] = [
    (0.0, 0.0),     // H
    (0.0, 45.0),    // V
    (45.0, 22.5),   // D
    (-45.0, -22.5), // A
    (0.0, -22.5),   // R
    (0.0, 22.5),    // L
];

/// Waveplate angles for one coincidence setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzerSetting {
    pub qwp_signal_deg: f64,
    pub hwp_signal_deg: f64,
    pub qwp_idler_deg: f64,
    pub hwp_idler_deg: f64,
}

impl AnalyzerSetting {
    pub fn new(
        qwp_signal_deg: f64,
        hwp_signal_deg: f64,
        qwp_idler_deg: f64,
        hwp_idler_deg: f64,
    ) -> Result<Self> {
        for (name, value) in [
            ("qwp_signal_deg", qwp_signal_deg),
            ("hwp_signal_deg", hwp_signal_deg),
            ("qwp_idler_deg", qwp_idler_deg),
            ("hwp_idler_deg", hwp_idler_deg),
        ] {
            if !value.is_finite() {
                return Err(CoreError::BadParameter { name, value });
            }
        }
        Ok(Self {
            qwp_signal_deg,
            hwp_signal_deg,
            qwp_idler_deg,
            hwp_idler_deg,
        })
    }

    /// State analyzed on the signal arm.
    pub fn signal_ket(&self) -> PolarizationKet {
        analyzed_state(self.qwp_signal_deg, self.hwp_signal_deg)
    }

    /// State analyzed on the idler arm.
    pub fn idler_ket(&self) -> PolarizationKet {
        analyzed_state(self.qwp_idler_deg, self.hwp_idler_deg)
    }

    /// Two-qubit product state this setting projects onto.
    pub fn pair_ket(&self) -> PolarizationKet {
        tensor(&self.signal_ket(), &self.idler_ket()).expect("arm kets are single-qubit")
    }
}

/// The input state mapped onto the polarizer's H port.
fn analyzed_state(qwp_deg: f64, hwp_deg: f64) -> PolarizationKet {
    let after_hwp = jones_hwp(hwp_deg)
        .adjoint()
        .apply(&ket_h())
        .expect("H is single-qubit");
    jones_qwp(qwp_deg)
        .adjoint()
        .apply(&after_hwp)
        .expect("arm state is single-qubit")
}

/// The canonical 36-setting product grid.
pub fn standard_settings() -> Vec<AnalyzerSetting> {
    let mut settings = Vec::with_capacity(36);
    for (qs, hs) in BASIS_ANGLES_DEG {
        for (qi, hi) in BASIS_ANGLES_DEG {
            settings.push(AnalyzerSetting {
                qwp_signal_deg: qs,
                hwp_signal_deg: hs,
                qwp_idler_deg: qi,
                hwp_idler_deg: hi,
            });
        }
    }
    settings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{ket_a, ket_d, ket_l, ket_r, ket_v};
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn canonical_kets() -> [PolarizationKet; 6] {
        [ket_h(), ket_v(), ket_d(), ket_a(), ket_r(), ket_l()]
    }

    #[test]
    fn table_matches_named_states() {
        let kets = canonical_kets();
        for (i, (q, h)) in BASIS_ANGLES_DEG.iter().enumerate() {
            let got = analyzed_state(*q, *h);
            let ov = got.inner(&kets[i]).norm();
            assert!(
                (ov - 1.0).abs() < 1e-12,
                "{}: overlap {ov}",
                BASIS_LABELS[i]
            );
        }
    }

    #[test]
    fn grid_is_36_in_signal_outer_order() {
        let settings = standard_settings();
        assert_eq!(settings.len(), 36);
        let kets = canonical_kets();
        for (id, s) in settings.iter().enumerate() {
            let sig = id / 6;
            let idl = id % 6;
            assert!((s.signal_ket().inner(&kets[sig]).norm() - 1.0).abs() < 1e-12);
            assert!((s.idler_ket().inner(&kets[idl]).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bases_are_mutually_unbiased() {
        let kets = canonical_kets();
        // Within a pair: orthogonal. Across pairs: |overlap|^2 = 1/2.
        for i in 0..6 {
            for j in 0..6 {
                let ov2 = kets[i].inner(&kets[j]).norm_sqr();
                let expected = if i == j {
                    1.0
                } else if i / 2 == j / 2 {
                    0.0
                } else {
                    0.5
                };
                assert!((ov2 - expected).abs() < 1e-12, "({i},{j}): {ov2}");
            }
        }
    }

    #[test]
    fn basis_pairs_resolve_the_identity() {
        let kets = canonical_kets();
        for pair in 0..3 {
            let a = &kets[2 * pair];
            let b = &kets[2 * pair + 1];
            let mut sum = DMatrix::<Complex64>::zeros(2, 2);
            for k in [a, b] {
                let v = k.amplitudes();
                sum += v * v.adjoint();
            }
            for i in 0..2 {
                for j in 0..2 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((sum[(i, j)] - Complex64::new(expect, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn pair_ket_is_the_product_state() {
        let settings = standard_settings();
        // Setting 14 = (D, D): overlap with Phi+ must be 1/2 in probability.
        let dd = settings[14].pair_ket();
        let phi_plus = crate::quantum::bell_state(crate::quantum::BellKind::PhiPlus);
        assert!((dd.inner(&phi_plus).norm_sqr() - 0.5).abs() < 1e-12);
        assert!(AnalyzerSetting::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
    }
}
