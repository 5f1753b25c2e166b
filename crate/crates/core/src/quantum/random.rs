//! Seeded random states and unitaries for tests and self-checks.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::quantum::density::DensityMatrix;
use crate::quantum::jones::JonesOperator;
use crate::quantum::ket::{bell_state, BELL_KINDS};

/// Hilbert-Schmidt-ish random mixed state: G G^dag / Tr, Ginibre G.
pub fn random_density_matrix(rng: &mut impl Rng) -> DensityMatrix {
    let g = DMatrix::<Complex64>::from_fn(4, 4, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / tr)).expect("Ginibre construction is a valid state")
}

/// Haar-ish random single-qubit unitary from three angles.
pub fn random_qubit_unitary(rng: &mut impl Rng) -> JonesOperator {
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
    let alpha: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let beta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let (ct, st) = (theta.cos(), theta.sin());
    let m = Matrix2::new(
        Complex64::from_polar(ct, alpha),
        Complex64::from_polar(st, beta),
        -Complex64::from_polar(st, -beta),
        Complex64::from_polar(ct, -alpha),
    );
    JonesOperator::new(m).expect("SU(2) construction is unitary")
}

/// Random mixture of the four Bell projectors.
pub fn random_bell_diagonal(rng: &mut impl Rng) -> (DensityMatrix, [f64; 4]) {
    let mut w = [0.0; 4];
    let mut total = 0.0;
    for x in w.iter_mut() {
        *x = rng.gen_range(0.01..1.0);
        total += *x;
    }
    for x in w.iter_mut() {
        *x /= total;
    }
    let rho = DensityMatrix::mixture(&[
        (w[0], bell_state(BELL_KINDS[0])),
        (w[1], bell_state(BELL_KINDS[1])),
        (w[2], bell_state(BELL_KINDS[2])),
        (w[3], bell_state(BELL_KINDS[3])),
    ])
    .expect("Bell mixture is a valid state");
    (rho, w)
}
