//! Invariants checked over seeded random ensembles, spanning module
//! boundaries: entanglement measures under local unitaries, closed-form
//! oracles for Bell-diagonal states, conservation laws of the
//! demultiplexer, and scaling laws of the switch phase.

use nolm_core::profile::SampledProfile;
use nolm_core::quantum::random::{
    random_bell_diagonal, random_density_matrix, random_qubit_unitary,
};
use nolm_core::quantum::{
    apply_local, bell_state, entanglement_metrics, fidelity_to_pure, fully_entangled_fraction,
    tangle, BellKind,
};
use nolm_core::rng::rng_from_seed;
use nolm_core::source::{demultiplex, tdm_stream, SourceConfig, SpatialMode};
use nolm_core::switch::{
    phase_from_port_powers, phase_profile, split_energy, transmission_window, FiberParams,
    SwitchConfig, TransmissionWindow,
};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn entanglement_measures_are_local_unitary_invariant() {
    let mut rng = rng_from_seed(101);
    for case in 0..100 {
        let rho = random_density_matrix(&mut rng);
        let u_s = random_qubit_unitary(&mut rng);
        let u_i = random_qubit_unitary(&mut rng);
        let rotated = apply_local(&u_s, &u_i, &rho).unwrap();

        let t0 = tangle(&rho).unwrap();
        let t1 = tangle(&rotated).unwrap();
        assert!((t0 - t1).abs() < 1e-9, "case {case}: tangle {t0} vs {t1}");

        let f0 = fully_entangled_fraction(&rho).unwrap();
        let f1 = fully_entangled_fraction(&rotated).unwrap();
        assert!((f0 - f1).abs() < 5e-6, "case {case}: fef {f0} vs {f1}");

        let p0 = rho.purity();
        let p1 = rotated.purity();
        assert!((p0 - p1).abs() < 1e-12, "case {case}: purity moved");
    }
}

#[test]
fn bell_diagonal_fef_equals_the_largest_weight() {
    let mut rng = rng_from_seed(102);
    for case in 0..150 {
        let (rho, w) = random_bell_diagonal(&mut rng);
        let expected = w.iter().cloned().fold(f64::MIN, f64::max);
        let fef = fully_entangled_fraction(&rho).unwrap();
        assert!(
            (fef - expected).abs() < 1e-5,
            "case {case}: fef {fef} vs max weight {expected}"
        );
    }
}

#[test]
fn metric_ranges_and_cross_metric_bounds() {
    let mut rng = rng_from_seed(103);
    for case in 0..150 {
        let rho = random_density_matrix(&mut rng);
        let m = entanglement_metrics(&rho).unwrap();
        assert!((0.0..=1.0).contains(&m.tangle), "case {case}");
        assert!((0.0..=1.0).contains(&m.linear_entropy), "case {case}");
        // The four Bell projectors average to 1/4, so the best
        // maximally entangled overlap can never fall below it.
        assert!(
            m.fidelity_max >= 0.25 - 1e-6 && m.fidelity_max <= 1.0,
            "case {case}: fef {}",
            m.fidelity_max
        );
        // Concurrence lower bound from the entangled-state overlap.
        let concurrence = m.tangle.sqrt();
        assert!(
            concurrence >= 2.0 * m.fidelity_max - 1.0 - 1e-6,
            "case {case}: C {concurrence} vs 2F-1 {}",
            2.0 * m.fidelity_max - 1.0
        );
        // The named Bell state is one feasible point of the maximization.
        let f_phi = fidelity_to_pure(&bell_state(BellKind::PhiPlus), &rho).unwrap();
        assert!(m.fidelity_max >= f_phi - 1e-6, "case {case}");
    }
}

/// Smooth synthetic window: floor eps plus a raised-cosine bump of the
/// given half width, clipped to the valid transmission range.
fn bump_window(center_ps: f64, half_width_ps: f64, eps: f64) -> TransmissionWindow {
    let step = 1.0;
    let lo = center_ps - half_width_ps - 2.0 * step;
    let n = (2.0 * (half_width_ps + 2.0 * step) / step).round() as usize + 1;
    let values: Vec<f64> = (0..n)
        .map(|i| {
            let t = lo + i as f64 * step;
            let x = (t - center_ps) / half_width_ps;
            if x.abs() >= 1.0 {
                eps
            } else {
                eps + (1.0 - 2.0 * eps) * 0.5 * (1.0 + (std::f64::consts::PI * x).cos())
            }
        })
        .collect();
    let grid = SampledProfile::new(lo, step, values).unwrap();
    TransmissionWindow::from_samples(grid, eps).unwrap()
}

#[test]
fn demultiplex_conserves_weight_for_arbitrary_windows() {
    let mut rng = rng_from_seed(104);
    let stream = tdm_stream(&SourceConfig::default()).unwrap();
    let (lo, hi) = stream.support_ps();
    for _ in 0..120 {
        let center = rng.gen_range(lo..hi);
        let half_width = rng.gen_range(5.0..400.0);
        let window = bump_window(center, half_width, 1.0 / 151.0)
            .extended_to(lo - 1.0, hi + 1.0)
            .unwrap();
        let routed = demultiplex(&stream, &window).unwrap();
        let total: f64 = routed.channels().iter().map(|c| c.weight).sum();
        assert!((total - 1.0).abs() < 1e-9, "weight drifted to {total}");
        assert!(routed
            .channels()
            .iter()
            .all(|c| c.weight > 0.0 && c.weight <= 1.0));
    }
}

#[test]
fn demultiplex_is_time_translation_invariant() {
    let mut rng = rng_from_seed(105);
    let config = SourceConfig::default();
    let stream = tdm_stream(&config).unwrap();
    let (lo, hi) = stream.support_ps();
    let window = bump_window(config.t0_ps, 90.0, 1.0 / 151.0)
        .extended_to(lo - 1.0, hi + 1.0)
        .unwrap();
    let base = demultiplex(&stream, &window).unwrap();
    for _ in 0..100 {
        let delta = rng.gen_range(-5_000.0..5_000.0);
        let moved = demultiplex(
            &stream.shifted(delta),
            &window.shifted(delta).extended_to(lo + delta - 1.0, hi + delta + 1.0).unwrap(),
        )
        .unwrap();
        assert_eq!(base.channels().len(), moved.channels().len());
        for (a, b) in base.channels().iter().zip(moved.channels()) {
            assert!((a.weight - b.weight).abs() < 1e-9, "delta {delta}");
            assert_eq!(a.spatial_mode, b.spatial_mode);
            assert!((a.t_center_ps + delta - b.t_center_ps).abs() < 1e-6);
        }
    }
}

#[test]
fn demultiplexed_capture_grows_with_window_width() {
    let config = SourceConfig::default();
    let stream = tdm_stream(&config).unwrap();
    let (lo, hi) = stream.support_ps();
    let mut last_captured = -1.0;
    // 120 log-spaced widths from narrower than a bin to wider than the
    // whole stream.
    for k in 0..120 {
        let half_width = 15.0 * (1600.0f64 / 15.0).powf(k as f64 / 119.0);
        let window = bump_window(config.t0_ps, half_width, 1.0 / 151.0)
            .extended_to(lo - 1.0, hi + 1.0)
            .unwrap();
        let routed = demultiplex(&stream, &window).unwrap();
        let captured: f64 = routed
            .channels()
            .iter()
            .filter(|c| c.spatial_mode == SpatialMode::T)
            .map(|c| c.weight)
            .sum();
        assert!(
            captured >= last_captured - 1e-12,
            "capture fell from {last_captured} to {captured} at half width {half_width}"
        );
        last_captured = captured;
    }
    // A window wider than the bin spacing captures both bins.
    assert!(last_captured > 0.9);
}

#[test]
fn transmission_stays_within_the_leakage_bounds() {
    let mut rng = rng_from_seed(106);
    for _ in 0..100 {
        let length = rng.gen_range(2.0..600.0);
        let energy = rng.gen_range(0.1..7.0);
        let config = SwitchConfig::for_length(length)
            .unwrap()
            .with_energy(energy)
            .unwrap();
        let window = transmission_window(&config).unwrap();
        let eps = window.extinction();
        let grid = window.profile();
        for i in 0..grid.len() {
            let v = grid.values()[i];
            assert!(
                (eps - 1e-12..=1.0 - eps + 1e-12).contains(&v),
                "length {length} energy {energy}: T = {v}"
            );
        }
        // Far outside the window the floor applies exactly.
        assert!((window.transmission_at(grid.t0_ps() - 1e4) - eps).abs() < 1e-15);
        assert!((window.reflection_at(grid.t0_ps() - 1e4) - (1.0 - eps)).abs() < 1e-15);
    }
}

#[test]
fn accumulated_phase_is_linear_in_pump_energy() {
    let mut rng = rng_from_seed(107);
    let base = SwitchConfig::for_length(100.0).unwrap();
    let reference = phase_profile(&base).unwrap();
    for _ in 0..100 {
        let ratio = rng.gen_range(0.05..3.0);
        let scaled = phase_profile(
            &base.clone().with_energy(base.pump_energy_nj * ratio).unwrap(),
        )
        .unwrap();
        for t in [-40.0, -10.0, 0.0, 35.0, 90.0, 170.0] {
            let want = reference.at(t) * ratio;
            let got = scaled.at(t);
            assert!(
                (got - want).abs() < 1e-9 * ratio.max(1.0),
                "ratio {ratio} at t={t}: {got} vs {want}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    /// Two colors whose switch phases are complementary (phi and pi - phi)
    /// produce one-color estimates that sum to pi exactly, for any leakage
    /// floor and any power split between the colors: the floor enters both
    /// port powers symmetrically and cancels in the ratio.
    #[test]
    fn complementary_phase_estimates_sum_to_pi(
        phi in 0.01f64..(std::f64::consts::PI - 0.01),
        eps in 0.0f64..0.2,
        split in 0.05f64..0.95,
    ) {
        let t = |p: f64| eps + (1.0 - 2.0 * eps) * (p / 2.0).sin().powi(2);
        let phi2 = std::f64::consts::PI - phi;
        let (pow1, pow2) = (split, 1.0 - split);
        let est1 = phase_from_port_powers(pow1 * t(phi), pow1 * (1.0 - t(phi))).unwrap();
        let est2 = phase_from_port_powers(pow2 * t(phi2), pow2 * (1.0 - t(phi2))).unwrap();
        prop_assert!(
            (est1 + est2 - std::f64::consts::PI).abs() < 1e-9,
            "phi={} eps={} split={}: {} + {}", phi, eps, split, est1, est2
        );
    }

    /// Shifting a profile moves its centroid and nothing else.
    #[test]
    fn profile_shift_moves_centroid_only(
        center in -200.0f64..200.0,
        fwhm in 2.0f64..80.0,
        delta in -500.0f64..500.0,
    ) {
        let p = SampledProfile::gaussian(center, fwhm, 0.25, 6.0)
            .unwrap()
            .normalized()
            .unwrap();
        let moved = p.shifted(delta);
        prop_assert!((moved.area() - p.area()).abs() < 1e-12);
        prop_assert!((moved.fwhm().unwrap() - p.fwhm().unwrap()).abs() < 1e-9);
        prop_assert!((moved.centroid().unwrap() - p.centroid().unwrap() - delta).abs() < 1e-9);
        prop_assert!((moved.max_value() - p.max_value()).abs() < 1e-15);
    }

    /// The pump splitter conserves energy and respects the imbalance sign.
    #[test]
    fn energy_split_conserves_and_orders(
        total in 0.01f64..20.0,
        imbalance in -1.0f64..1.0,
    ) {
        let (a, b) = split_energy(total, imbalance).unwrap();
        prop_assert!(a >= 0.0 && b >= 0.0);
        prop_assert!((a + b - total).abs() < 1e-12 * total);
        if imbalance > 0.0 {
            prop_assert!(a >= b);
        } else if imbalance < 0.0 {
            prop_assert!(a <= b);
        }
    }
}

#[test]
fn walkoff_bookkeeping_is_consistent_for_random_fibers() {
    let mut rng = rng_from_seed(108);
    for _ in 0..200 {
        let length = rng.gen_range(0.5..800.0);
        let rate = rng.gen_range(0.0..3.0);
        let fiber = FiberParams::with_walkoff_rate(length, rate).unwrap();
        let wb = nolm_core::switch::walkoff(&fiber);
        assert!((wb.walkoff_ps - length * rate).abs() < 1e-9 * (length * rate).max(1.0));
        // Route consistency: transit difference equals the walkoff, and
        // the pullahead distance converts back through the signal slowness.
        let signal_transit = length * fiber.inv_gv_signal_ps_per_m;
        assert!(
            (wb.pump_transit_ps - signal_transit - wb.walkoff_ps).abs()
                < 1e-9 * wb.pump_transit_ps.max(1.0)
        );
        assert!(
            (wb.pullahead_m * fiber.inv_gv_signal_ps_per_m - wb.walkoff_ps).abs()
                < 1e-9 * wb.walkoff_ps.max(1.0)
        );
    }
}
