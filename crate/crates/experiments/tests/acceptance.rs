//! Acceptance gate: ten end-to-end criteria, one test and one printed
//! verdict line each. Every tolerance is pinned here as a named constant;
//! a criterion passes only if all of its sub-checks hold and the work
//! finishes inside its runtime budget. Run with `--nocapture` to see the
//! PASS lines; failures always print.

use std::collections::BTreeMap;
use std::time::Instant;

use nolm_core::quantum::random::random_density_matrix;
use nolm_core::quantum::{trace_distance, DensityMatrix};
use nolm_core::rng::rng_from_seed;
use nolm_core::switch::{walkoff, FiberParams};
use nolm_core::tomo::{
    expected_rates, mle_reconstruct, standard_settings, CountRecord, NoiseParams,
};
use rand::Rng;

use nolm_experiments::{run_scenario, ExperimentConfig, RunSummary, Scenario};

// ---- pinned tolerances and budgets -------------------------------------

const WALKOFF_100M_PS: f64 = 170.0;
const WALKOFF_500M_PS: f64 = 850.0;
const WALKOFF_REL_TOL: f64 = 1e-9;
const N_RANDOM_FIBERS: usize = 1000;
const BUDGET_1_S: f64 = 1.0;

const DECONV_100M_PS: f64 = 180.0;
const DECONV_500M_PS: f64 = 900.0;
const DECONV_REL_TOL: f64 = 0.10;
const BROADENING_MIN_PS: f64 = 150.0;
const BROADENING_MAX_PS: f64 = 200.0;
const SAMPLER_RATIO_TOL: f64 = 0.05;
const BUDGET_2_S: f64 = 30.0;

const CLASSICAL_PEAK: f64 = 150.0;
const CLASSICAL_PEAK_REL_TOL: f64 = 0.01;
const PEAK_ENERGY_NJ: f64 = 2.5;
const PEAK_ENERGY_TOL_NJ: f64 = 0.13;
const SP_PEAK_MIN: f64 = 100.0;
const SP_PEAK_MAX: f64 = 150.0;
const SHORT_LOOP_MIN: f64 = 4.6; // reference 9.2 within a factor of two
const SHORT_LOOP_MAX: f64 = 15.0;
const PUMP_OFF: f64 = 1.0 / 150.0;
const PUMP_OFF_TOL: f64 = 1e-6;
const BUDGET_3_S: f64 = 60.0;

const SCATTER_SLOPE_PER_M: f64 = 4.0e-7;
const SCATTER_SLOPE_REL_TOL: f64 = 0.01;
const GATED_SLOPE_PER_PS: f64 = 2.0e-7;
const GATED_SLOPE_REL_TOL: f64 = 0.05;
const BUDGET_4_S: f64 = 10.0;

const N_RANDOM_STATES: usize = 200;
const TOMO_COUNT_SCALE: f64 = 1.0e5;
const TOMO_TRACE_DIST_MAX: f64 = 0.01;
const MIXED_TRACE_DIST_MAX: f64 = 1e-3;
const BUDGET_5_S: f64 = 60.0;

const SWITCHED_FIDELITY_MIN: f64 = 0.99;
const BUDGET_6_S: f64 = 120.0;

const FEF_IDEAL: f64 = 0.6097560975609756;
const FEF_IDEAL_TOL: f64 = 1e-4;
const FEF_NOISY: f64 = 0.589;
const FEF_NOISY_TOL: f64 = 0.02;
const FEF_DEMUX_MIN: f64 = 0.98;
const FEF_CHANNEL_MIN: f64 = 0.99;
const BUDGET_7_S: f64 = 120.0;

const EYE_DELAY_PS: f64 = 225.0;
const EYE_DELAY_TOL_PS: f64 = 25.0;
const EYE_SPACING_PS: f64 = 300.0;
const EYE_SPACING_TOL_PS: f64 = 5.0;
const EYE_MISMATCH_MAX: f64 = 0.05;
const BUDGET_8_S: f64 = 30.0;

const BUDGET_9_S: f64 = 30.0;

// ---- harness ------------------------------------------------------------

struct Criterion {
    number: u32,
    label: &'static str,
    budget_s: Option<f64>,
    started: Instant,
    failures: Vec<String>,
}

impl Criterion {
    fn new(number: u32, label: &'static str, budget_s: Option<f64>) -> Self {
        Self {
            number,
            label,
            budget_s,
            started: Instant::now(),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn check_abs(&mut self, what: &str, value: f64, reference: f64, tol: f64) {
        if !(value.is_finite() && (value - reference).abs() <= tol) {
            self.failures
                .push(format!("{what}: {value} is not within {tol} of {reference}"));
        }
    }

    fn check_rel(&mut self, what: &str, value: f64, reference: f64, rel_tol: f64) {
        self.check_abs(what, value, reference, rel_tol * reference.abs());
    }

    fn check_range(&mut self, what: &str, value: f64, min: f64, max: f64) {
        if !(value.is_finite() && value >= min && value <= max) {
            self.failures
                .push(format!("{what}: {value} is outside [{min}, {max}]"));
        }
    }

    fn finish(mut self) {
        let elapsed = self.started.elapsed().as_secs_f64();
        if let Some(budget) = self.budget_s {
            if elapsed >= budget {
                self.failures
                    .push(format!("runtime {elapsed:.2} s exceeds the {budget} s budget"));
            }
        }
        let verdict = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "ACCEPTANCE {:02} {verdict} — {} ({elapsed:.2} s)",
            self.number, self.label
        );
        assert!(
            self.failures.is_empty(),
            "criterion {:02} failed:\n  {}",
            self.number,
            self.failures.join("\n  ")
        );
    }
}

fn run_stock(scenario: Scenario) -> (RunSummary, tempfile::TempDir) {
    let dir = tempfile::tempdir().expect("create a temporary output directory");
    let mut config = ExperimentConfig::default_for(scenario);
    config.output_dir = Some(dir.path().to_path_buf());
    let summary = run_scenario(&config).expect("scenario completes");
    (summary, dir)
}

fn metric(summary: &RunSummary, name: &str) -> f64 {
    summary
        .metrics
        .iter()
        .find(|m| m.name == name)
        .unwrap_or_else(|| panic!("summary has no metric named {name}"))
        .value
}

// ---- criteria -----------------------------------------------------------

#[test]
fn criterion_01_walkoff_times_and_dispersion_bookkeeping() {
    let mut c = Criterion::new(1, "walkoff times and dispersion bookkeeping", Some(BUDGET_1_S));

    let tau = |length: f64| {
        walkoff(&FiberParams::with_length(length).expect("stock fiber builds")).walkoff_ps
    };
    c.check_rel("walkoff at 100 m", tau(100.0), WALKOFF_100M_PS, WALKOFF_REL_TOL);
    c.check_rel("walkoff at 500 m", tau(500.0), WALKOFF_500M_PS, WALKOFF_REL_TOL);

    // The three bookkeeping relations stay mutually consistent over random
    // fibers: walkoff = length x rate, walkoff = transit difference, and
    // walkoff = pullahead distance converted through the signal slowness.
    let mut rng = rng_from_seed(11);
    for i in 0..N_RANDOM_FIBERS {
        let length = rng.gen_range(0.5..800.0);
        let rate = rng.gen_range(1e-3..3.0);
        let fiber = FiberParams::with_walkoff_rate(length, rate).expect("random fiber builds");
        let wb = walkoff(&fiber);
        let scale = wb.walkoff_ps.abs().max(1.0);
        c.check(
            &format!("fiber {i}: walkoff equals length x rate"),
            (wb.walkoff_ps - length * rate).abs() <= WALKOFF_REL_TOL * scale,
        );
        let signal_transit = length * fiber.inv_gv_signal_ps_per_m;
        c.check(
            &format!("fiber {i}: walkoff equals the transit difference"),
            (wb.pump_transit_ps - signal_transit - wb.walkoff_ps).abs()
                <= WALKOFF_REL_TOL * wb.pump_transit_ps.abs().max(1.0),
        );
        c.check(
            &format!("fiber {i}: pullahead converts back to the walkoff"),
            (wb.pullahead_m * fiber.inv_gv_signal_ps_per_m - wb.walkoff_ps).abs()
                <= WALKOFF_REL_TOL * scale,
        );
    }
    c.finish();
}

#[test]
fn criterion_02_window_widths_from_traced_curves() {
    let mut c = Criterion::new(2, "window widths from traced curves", Some(BUDGET_2_S));
    let (summary, _dir) = run_stock(Scenario::Window);
    c.check_rel(
        "deconvolved width at 100 m",
        metric(&summary, "deconvolved_width_100m_ps"),
        DECONV_100M_PS,
        DECONV_REL_TOL,
    );
    c.check_rel(
        "deconvolved width at 500 m",
        metric(&summary, "deconvolved_width_500m_ps"),
        DECONV_500M_PS,
        DECONV_REL_TOL,
    );
    c.check_range(
        "trace broadening at 100 m",
        metric(&summary, "trace_broadening_100m_ps"),
        BROADENING_MIN_PS,
        BROADENING_MAX_PS,
    );
    c.check_range(
        "trace broadening at 500 m",
        metric(&summary, "trace_broadening_500m_ps"),
        BROADENING_MIN_PS,
        BROADENING_MAX_PS,
    );
    c.check_abs(
        "short-loop trace reproduces the probe width",
        metric(&summary, "sampler_fwhm_ratio_2m"),
        1.0,
        SAMPLER_RATIO_TOL,
    );
    c.finish();
}

#[test]
fn criterion_03_switching_contrast() {
    let mut c = Criterion::new(3, "switching contrast, classical and single-photon", Some(BUDGET_3_S));
    let (summary, _dir) = run_stock(Scenario::Contrast);
    c.check_rel(
        "classical peak contrast at 500 m",
        metric(&summary, "classical_peak_contrast_500m"),
        CLASSICAL_PEAK,
        CLASSICAL_PEAK_REL_TOL,
    );
    c.check_abs(
        "classical peak sits at the full-switch energy",
        metric(&summary, "classical_peak_energy_nj_500m"),
        PEAK_ENERGY_NJ,
        PEAK_ENERGY_TOL_NJ,
    );
    c.check_range(
        "single-photon peak contrast at 500 m",
        metric(&summary, "single_photon_peak_contrast_500m"),
        SP_PEAK_MIN,
        SP_PEAK_MAX,
    );
    c.check_range(
        "classical contrast at 100 m with the tailed probe",
        metric(&summary, "classical_peak_contrast_100m"),
        SHORT_LOOP_MIN,
        SHORT_LOOP_MAX,
    );
    c.check_abs(
        "pump-off leakage floor",
        metric(&summary, "pump_off_contrast_500m"),
        PUMP_OFF,
        PUMP_OFF_TOL,
    );
    c.finish();
}

#[test]
fn criterion_04_scattering_background_rates() {
    let mut c = Criterion::new(4, "scattering background rates", Some(BUDGET_4_S));
    let (summary, _dir) = run_stock(Scenario::Background);
    c.check_rel(
        "background slope per meter",
        metric(&summary, "background_slope_per_m"),
        SCATTER_SLOPE_PER_M,
        SCATTER_SLOPE_REL_TOL,
    );
    c.check_rel(
        "gated background slope per picosecond",
        metric(&summary, "gated_background_slope_per_ps"),
        GATED_SLOPE_PER_PS,
        GATED_SLOPE_REL_TOL,
    );
    c.finish();
}

#[test]
fn criterion_05_tomography_reconstruction_accuracy() {
    let mut c = Criterion::new(5, "tomography reconstruction accuracy", Some(BUDGET_5_S));
    let settings = standard_settings();

    // Noiseless counts at a fixed scale: expected pair rates times the
    // count scale, no Poisson sampling, no floors.
    let noiseless = |rho: &DensityMatrix| -> Vec<CountRecord> {
        settings
            .iter()
            .enumerate()
            .map(|(id, s)| {
                let mu = TOMO_COUNT_SCALE
                    * expected_rates(rho, s, 0.5, &NoiseParams::ideal())
                        .expect("expected rates for a valid state")
                        .pair_per_gate
                    / 0.5;
                CountRecord {
                    setting_id: id,
                    n_pulses: TOMO_COUNT_SCALE as u64,
                    coincidences_raw: mu.round() as u64,
                    singles_signal: 0,
                    singles_idler: 0,
                    accidentals_est: 0.0,
                    coincidences_corrected: mu,
                }
            })
            .collect()
    };

    let mut rng = rng_from_seed(5);
    let mut worst = 0.0f64;
    for i in 0..N_RANDOM_STATES {
        let rho = random_density_matrix(&mut rng);
        let records = noiseless(&rho);
        let fit = mle_reconstruct(&records, &settings).expect("reconstruction converges");
        let dist = trace_distance(&fit.rho, &rho).expect("states are comparable");
        worst = worst.max(dist);
        c.check(
            &format!("state {i}: trace distance {dist:.2e} below {TOMO_TRACE_DIST_MAX}"),
            dist < TOMO_TRACE_DIST_MAX,
        );
    }
    println!("  criterion 05: worst trace distance {worst:.2e} over {N_RANDOM_STATES} states");

    // Equal counts at every setting carry no polarization information:
    // the fit must return the maximally mixed state.
    let flat: Vec<CountRecord> = (0..settings.len())
        .map(|id| CountRecord {
            setting_id: id,
            n_pulses: TOMO_COUNT_SCALE as u64,
            coincidences_raw: 1000,
            singles_signal: 0,
            singles_idler: 0,
            accidentals_est: 0.0,
            coincidences_corrected: 1000.0,
        })
        .collect();
    let fit = mle_reconstruct(&flat, &settings).expect("flat reconstruction converges");
    let mixed = DensityMatrix::maximally_mixed(4).expect("the maximally mixed state exists");
    c.check_range(
        "equal counts reconstruct to the maximally mixed state",
        trace_distance(&fit.rho, &mixed).expect("states are comparable"),
        0.0,
        MIXED_TRACE_DIST_MAX,
    );
    c.finish();
}

#[test]
fn criterion_06_switch_preserves_the_entangled_state() {
    let mut c = Criterion::new(6, "switch preserves the entangled state", Some(BUDGET_6_S));
    let (summary, _dir) = run_stock(Scenario::SwitchTomo);
    for name in [
        "fidelity_100m_passive",
        "fidelity_100m_active",
        "fidelity_500m_passive",
        "fidelity_500m_active",
    ] {
        c.check_range(name, metric(&summary, name), SWITCHED_FIDELITY_MIN, 1.0);
    }
    // The active-passive fidelity difference must sit inside the combined
    // bootstrap error bars (the target is computed from the resampled
    // uncertainties at run time, so use the recorded verdict).
    for name in ["fidelity_shift_100m", "fidelity_shift_500m"] {
        let m = summary
            .metrics
            .iter()
            .find(|m| m.name == name)
            .unwrap_or_else(|| panic!("summary has no metric named {name}"));
        c.check(
            &format!("{name}: {} within the combined error bars", m.value),
            m.pass,
        );
    }
    let resamples = summary.details["n_resamples"].as_u64().unwrap_or(0);
    c.check(
        &format!("bootstrap ran with {resamples} resamples"),
        resamples >= 100,
    );
    c.finish();
}

#[test]
fn criterion_07_multiplexed_source_and_demultiplexer() {
    let mut c = Criterion::new(7, "multiplexed source and demultiplexer", Some(BUDGET_7_S));
    let (summary, _dir) = run_stock(Scenario::TdmDemux);
    c.check_abs(
        "model multiplexed entangled fraction",
        metric(&summary, "fef_multiplexed_ideal"),
        FEF_IDEAL,
        FEF_IDEAL_TOL,
    );
    c.check_abs(
        "reconstructed multiplexed entangled fraction",
        metric(&summary, "fef_multiplexed"),
        FEF_NOISY,
        FEF_NOISY_TOL,
    );
    c.check_range(
        "demultiplexed entangled fraction",
        metric(&summary, "fef_demultiplexed"),
        FEF_DEMUX_MIN,
        1.0,
    );
    c.check_range(
        "channel-1 entangled fraction",
        metric(&summary, "fef_channel1"),
        FEF_CHANNEL_MIN,
        1.0,
    );
    c.check_range(
        "channel-2 entangled fraction",
        metric(&summary, "fef_channel2"),
        FEF_CHANNEL_MIN,
        1.0,
    );
    c.finish();
}

#[test]
fn criterion_08_demultiplexer_eye_diagram() {
    let mut c = Criterion::new(8, "demultiplexer eye diagram", Some(BUDGET_8_S));
    let (summary, _dir) = run_stock(Scenario::Eye);
    c.check_abs(
        "optimal drive delay",
        metric(&summary, "eye_optimal_delay_ps"),
        EYE_DELAY_PS,
        EYE_DELAY_TOL_PS,
    );
    c.check_abs(
        "channel curves are spaced by one bin",
        metric(&summary, "eye_channel_spacing_ps"),
        EYE_SPACING_PS,
        EYE_SPACING_TOL_PS,
    );
    c.check_range(
        "shifted channel curves overlay",
        metric(&summary, "eye_translate_mismatch"),
        0.0,
        EYE_MISMATCH_MAX,
    );
    c.finish();
}

#[test]
fn criterion_09_property_suites() {
    let mut c = Criterion::new(
        9,
        "physics-core property suites (each at 100+ cases)",
        Some(BUDGET_9_S),
    );
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".to_string());
    let output = std::process::Command::new(cargo)
        .args(["test", "-p", "nolm-core", "--test", "properties"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("property suite launches");
    let stdout = String::from_utf8_lossy(&output.stdout);
    c.check(
        &format!(
            "property suite passes (status {:?}, tail: {})",
            output.status.code(),
            stdout.lines().rev().take(3).collect::<Vec<_>>().join(" | ")
        ),
        output.status.success(),
    );
    c.check(
        "all twelve property suites ran",
        stdout.contains("12 passed") && stdout.contains("0 failed"),
    );
    c.finish();
}

#[test]
fn criterion_10_outputs_are_deterministic() {
    let mut c = Criterion::new(10, "outputs are byte-identical per config and seed", None);
    for scenario in Scenario::ALL {
        let mut slurped: Vec<BTreeMap<String, Vec<u8>>> = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir().expect("create a temporary output directory");
            let mut config = ExperimentConfig::default_for(scenario);
            config.output_dir = Some(dir.path().to_path_buf());
            run_scenario(&config).expect("scenario completes");
            let mut files = BTreeMap::new();
            for entry in std::fs::read_dir(dir.path()).expect("list the run directory") {
                let entry = entry.expect("directory entry is readable");
                files.insert(
                    entry.file_name().to_string_lossy().into_owned(),
                    std::fs::read(entry.path()).expect("output file is readable"),
                );
            }
            slurped.push(files);
        }
        let (a, b) = (&slurped[0], &slurped[1]);
        c.check(
            &format!(
                "{}: both runs emit the same files ({:?} vs {:?})",
                scenario.tag(),
                a.keys().collect::<Vec<_>>(),
                b.keys().collect::<Vec<_>>()
            ),
            a.keys().eq(b.keys()),
        );
        c.check(
            &format!("{}: run emits at least a summary", scenario.tag()),
            a.contains_key("summary.json"),
        );
        for (name, bytes) in a {
            c.check(
                &format!("{}: {name} is byte-identical across runs", scenario.tag()),
                b.get(name) == Some(bytes),
            );
        }
    }
    c.finish();
}
