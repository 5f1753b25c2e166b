//! Per-color switching phase versus amplifier drive.
//!
//! The pump is split into two colors that each drive the loop alone; the
//! plateau transmission and reflection seen by each color are read out
//! through the lossy output ports, corrected for the known port losses,
//! and inverted to a nonlinear phase. At the drive whose total energy
//! equals the full-switch energy, each color should sit at half a switch
//! (a quarter turn), the two phases should balance, and their sum should
//! be a full half turn. Those three identities are the metrics; the swept
//! curves go to `color_phases.csv`.

use std::path::Path;

use nolm_core::switch::{phase_from_port_powers, split_energy, transmission_window};
use serde::Serialize;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::{ExperimentError, Result};
use crate::output;
use crate::summary::{MetricCheck, RunSummary};
use crate::targets;

#[derive(Debug, Serialize)]
struct PhaseRow {
    edfa_setting: f64,
    total_energy_nj: f64,
    p_transmit_color1: f64,
    p_reflect_color1: f64,
    p_transmit_color2: f64,
    p_reflect_color2: f64,
    phase_color1_rad: f64,
    phase_color2_rad: f64,
}

pub fn run(config: &ExperimentConfig, out_dir: &Path) -> Result<RunSummary> {
    let sweep = config.sep_colors.clone().unwrap_or_default();
    if sweep.edfa_settings.is_empty() {
        return Err(ExperimentError::Config(
            "color-phase sweep needs at least one drive setting".into(),
        ));
    }
    if !(sweep.nj_per_setting.is_finite() && sweep.nj_per_setting > 0.0) {
        return Err(ExperimentError::Config(
            "drive calibration must be a positive energy per unit".into(),
        ));
    }
    let base = config.switch.build_for_length(sweep.length_m)?;
    let s_t = base.survival(base.loss_transmit_db);
    let s_r = base.survival(base.loss_reflect_db);
    let pi_energy = base.pi_energy_nj;

    let mut rows = Vec::with_capacity(sweep.edfa_settings.len());
    let mut at_full_switch: Option<(f64, f64)> = None;
    for &setting in &sweep.edfa_settings {
        let total_nj = setting * sweep.nj_per_setting;
        let (e1, e2) = split_energy(total_nj, sweep.imbalance)?;
        let mut measured = [(0.0, 0.0); 2];
        let mut phases = [0.0; 2];
        for (slot, energy) in [e1, e2].into_iter().enumerate() {
            let cfg = base.clone().with_energy(energy)?;
            let t_peak = transmission_window(&cfg)?.peak();
            // Powers as read at the two detectors, after the port losses.
            measured[slot] = (t_peak * s_t, (1.0 - t_peak) * s_r);
            // The estimator runs on loss-corrected powers; the losses are
            // calibration constants of the bench.
            phases[slot] = phase_from_port_powers(t_peak, 1.0 - t_peak)?;
        }
        if (total_nj - pi_energy).abs() < 1e-9 {
            at_full_switch = Some((phases[0], phases[1]));
        }
        rows.push(PhaseRow {
            edfa_setting: setting,
            total_energy_nj: total_nj,
            p_transmit_color1: measured[0].0,
            p_reflect_color1: measured[0].1,
            p_transmit_color2: measured[1].0,
            p_reflect_color2: measured[1].1,
            phase_color1_rad: phases[0],
            phase_color2_rad: phases[1],
        });
    }
    output::write_csv(&out_dir.join("color_phases.csv"), &rows)?;

    let mut metrics = Vec::new();
    if let Some((phi1, phi2)) = at_full_switch {
        metrics.push(MetricCheck::new(
            "phase_color1_at_full_switch_rad",
            phi1,
            targets::SINGLE_COLOR_HALF_PHASE_RAD,
        ));
        metrics.push(MetricCheck::new(
            "phase_color2_at_full_switch_rad",
            phi2,
            targets::SINGLE_COLOR_HALF_PHASE_RAD,
        ));
        metrics.push(MetricCheck::new(
            "phase_sum_at_full_switch_rad",
            phi1 + phi2,
            targets::COLOR_PHASE_SUM_RAD,
        ));
        if sweep.imbalance == 0.0 {
            metrics.push(MetricCheck::new(
                "phase_balance_at_full_switch_rad",
                phi1 - phi2,
                targets::COLOR_PHASE_BALANCE_RAD,
            ));
        }
    } else {
        return Err(ExperimentError::Config(format!(
            "drive sweep never reaches the full-switch energy {pi_energy} nJ; \
             the phase identities need that point"
        )));
    }

    let details = json!({
        "length_m": sweep.length_m,
        "full_switch_energy_nj": pi_energy,
        "port_survival_transmit": s_t,
        "port_survival_reflect": s_r,
        "imbalance": sweep.imbalance,
    });
    Ok(RunSummary::new(
        config.scenario.tag(),
        config.seed,
        metrics,
        details,
    ))
}
