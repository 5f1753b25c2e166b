//! Scenario configuration: a JSON document with a `scenario` tag, common
//! switch/source/noise sections, and at most one sweep section matching
//! the scenario. Unknown keys are rejected everywhere so a typo cannot
//! silently fall back to a default.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use nolm_core::quantum::DensityMatrix;
use nolm_core::source::SourceConfig;
use nolm_core::switch::{
    FiberParams, PumpPulse, SwitchConfig, DEFAULT_EXTINCTION, DEFAULT_GRID_STEP_PS,
    DEFAULT_PI_ENERGY_NJ, DEFAULT_WALKOFF_PS_PER_M, PORT_LOSSES_LONG_DB, PORT_LOSSES_SHORT_DB,
};
use nolm_core::tomo::NoiseParams;

use crate::error::{ExperimentError, Result};

/// Which experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Scenario {
    Contrast,
    Window,
    Background,
    SwitchTomo,
    SepColors,
    TdmDemux,
    Eye,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::Contrast,
        Scenario::Window,
        Scenario::Background,
        Scenario::SwitchTomo,
        Scenario::SepColors,
        Scenario::TdmDemux,
        Scenario::Eye,
    ];

    /// Tag used in summaries and error messages (matches the JSON form).
    pub fn tag(&self) -> &'static str {
        match self {
            Scenario::Contrast => "CONTRAST",
            Scenario::Window => "WINDOW",
            Scenario::Background => "BACKGROUND",
            Scenario::SwitchTomo => "SWITCH_TOMO",
            Scenario::SepColors => "SEP_COLORS",
            Scenario::TdmDemux => "TDM_DEMUX",
            Scenario::Eye => "EYE",
        }
    }
}

/// Switch operating point, mirrored into [`SwitchConfig`]. Port losses
/// follow the stock length presets and are not independent knobs here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SwitchSettings {
    pub length_m: f64,
    pub pump_energy_nj: f64,
    pub pi_energy_nj: f64,
    pub pump_fwhm_ps: f64,
    pub extinction: f64,
    pub grid_step_ps: f64,
    pub walkoff_ps_per_m: f64,
}

impl Default for SwitchSettings {
    fn default() -> Self {
        Self {
            length_m: 500.0,
            pump_energy_nj: DEFAULT_PI_ENERGY_NJ,
            pi_energy_nj: DEFAULT_PI_ENERGY_NJ,
            pump_fwhm_ps: 5.0,
            extinction: DEFAULT_EXTINCTION,
            grid_step_ps: DEFAULT_GRID_STEP_PS,
            walkoff_ps_per_m: DEFAULT_WALKOFF_PS_PER_M,
        }
    }
}

impl SwitchSettings {
    pub fn build(&self) -> Result<SwitchConfig> {
        self.build_for_length(self.length_m)
    }

    /// Build with the stated length replaced (sweeps vary the loop).
    pub fn build_for_length(&self, length_m: f64) -> Result<SwitchConfig> {
        let fiber = FiberParams::with_walkoff_rate(length_m, self.walkoff_ps_per_m)?;
        let pump = PumpPulse::gaussian(0.0, self.pump_fwhm_ps)?;
        let (loss_t, loss_r) = if length_m > 300.0 {
            PORT_LOSSES_LONG_DB
        } else {
            PORT_LOSSES_SHORT_DB
        };
        Ok(SwitchConfig::new(
            fiber,
            pump,
            self.pump_energy_nj,
            self.pi_energy_nj,
            self.extinction,
            self.grid_step_ps,
            loss_t,
            loss_r,
        )?)
    }
}

/// Pair-source operating point, mirrored into [`SourceConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SourceSettings {
    pub pump_fwhm_ps: f64,
    pub rep_rate_mhz: f64,
    pub pair_prob_per_pulse: f64,
    pub delta_t_ps: f64,
    pub c1_over_c2: f64,
    pub t0_ps: f64,
    pub grid_step_ps: f64,
}

impl Default for SourceSettings {
    fn default() -> Self {
        let s = SourceConfig::default();
        Self {
            pump_fwhm_ps: s.pump_fwhm_ps,
            rep_rate_mhz: s.rep_rate_mhz,
            pair_prob_per_pulse: s.pair_prob_per_pulse,
            delta_t_ps: s.delta_t_ps,
            c1_over_c2: s.c1_over_c2,
            t0_ps: s.t0_ps,
            grid_step_ps: s.grid_step_ps,
        }
    }
}

impl SourceSettings {
    pub fn build(&self) -> Result<SourceConfig> {
        let cfg = SourceConfig {
            pump_fwhm_ps: self.pump_fwhm_ps,
            rep_rate_mhz: self.rep_rate_mhz,
            pair_prob_per_pulse: self.pair_prob_per_pulse,
            delta_t_ps: self.delta_t_ps,
            c1_over_c2: self.c1_over_c2,
            t0_ps: self.t0_ps,
            grid_step_ps: self.grid_step_ps,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Calibrated noise model shared by the counting scenarios. `enabled:
/// false` turns every knob off for ideal-bench runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSettings {
    pub enabled: bool,
    /// Dark-count probability per detector per gate.
    pub dark_prob_per_gate: f64,
    /// Stray-light probability per detector per gate (before any in-loop
    /// scattering is added on top).
    pub background_prob_per_gate: f64,
    pub efficiency_signal: f64,
    pub efficiency_idler: f64,
    /// White-noise fraction mixed into every prepared polarization state:
    /// rho -> (1-x) rho + x I/4. Calibrated against the bench fidelities.
    pub state_white_noise: f64,
    /// Uncorrelated single-photon background per output port in the
    /// pair-rate contrast measurement, as a fraction of the pair rate.
    pub sp_background_per_port: f64,
}

impl Default for NoiseSettings {
    fn default() -> Self {
        Self {
            enabled: true,
            dark_prob_per_gate: 1.0e-6,
            background_prob_per_gate: 2.0e-6,
            efficiency_signal: 0.7,
            efficiency_idler: 0.7,
            state_white_noise: 0.010,
            sp_background_per_port: 1.667e-3,
        }
    }
}

impl NoiseSettings {
    /// Detector parameters with `extra_background` (for example in-loop
    /// scattering) added to both gates.
    pub fn params(&self, extra_background: f64) -> Result<NoiseParams> {
        if !self.enabled {
            return Ok(NoiseParams::ideal());
        }
        Ok(NoiseParams::new(
            self.dark_prob_per_gate,
            self.background_prob_per_gate + extra_background,
            self.efficiency_signal,
            self.efficiency_idler,
        )?)
    }

    /// The prepared state after the calibrated white-noise admixture.
    pub fn apply_state_noise(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if !self.enabled || self.state_white_noise == 0.0 {
            return Ok(rho.clone());
        }
        Ok(rho.depolarized(self.state_white_noise)?)
    }

    pub fn sp_background(&self) -> f64 {
        if self.enabled {
            self.sp_background_per_port
        } else {
            0.0
        }
    }
}

fn range_f64(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

/// Sweep for the CONTRAST scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ContrastSweep {
    pub lengths_m: Vec<f64>,
    pub energies_nj: Vec<f64>,
}

impl Default for ContrastSweep {
    fn default() -> Self {
        Self {
            lengths_m: vec![100.0, 500.0],
            energies_nj: range_f64(0.0, 3.0, 0.25),
        }
    }
}

/// Sweep for the WINDOW scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WindowSweep {
    pub lengths_m: Vec<f64>,
    pub delay_step_ps: f64,
    /// Padding beyond the intrinsic half-width on each side of the scan.
    pub delay_pad_ps: f64,
}

impl Default for WindowSweep {
    fn default() -> Self {
        Self {
            lengths_m: vec![2.0, 100.0, 500.0],
            delay_step_ps: 5.0,
            delay_pad_ps: 450.0,
        }
    }
}

/// Sweep for the BACKGROUND scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BackgroundSweep {
    pub lengths_m: Vec<f64>,
    pub gate_widths_ps: Vec<f64>,
    /// Loop length used for the gated sweep.
    pub gate_length_m: f64,
    /// Pulses per sweep point for the sampled-count column.
    pub n_pulses: u64,
}

impl Default for BackgroundSweep {
    fn default() -> Self {
        Self {
            lengths_m: vec![50.0, 100.0, 200.0, 300.0, 500.0],
            gate_widths_ps: vec![50.0, 100.0, 150.0, 200.0, 300.0, 400.0, 500.0],
            gate_length_m: 500.0,
            n_pulses: 1_000_000,
        }
    }
}

/// Sweep for the SWITCH_TOMO scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SwitchTomoSweep {
    pub lengths_m: Vec<f64>,
    pub n_pulses_per_setting: u64,
    pub n_resamples: u32,
    /// Coincidence gate width, ps (sets the in-loop scattering pickup).
    pub gate_ps: f64,
}

impl Default for SwitchTomoSweep {
    fn default() -> Self {
        Self {
            lengths_m: vec![100.0, 500.0],
            n_pulses_per_setting: 50_000_000,
            n_resamples: 100,
            gate_ps: 200.0,
        }
    }
}

/// Sweep for the SEP_COLORS scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SepColorsSweep {
    /// Amplifier drive settings, in instrument units.
    pub edfa_settings: Vec<f64>,
    /// Linear calibration from instrument units to total pump energy, nJ
    /// per unit.
    pub nj_per_setting: f64,
    /// Energy imbalance between the two colors, in [-1, 1].
    pub imbalance: f64,
    pub length_m: f64,
}

impl Default for SepColorsSweep {
    fn default() -> Self {
        Self {
            edfa_settings: range_f64(0.0, 3.0, 0.25),
            nj_per_setting: 1.0,
            imbalance: 0.0,
            length_m: 500.0,
        }
    }
}

/// Sweep for the TDM_DEMUX scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TdmDemuxSweep {
    pub length_m: f64,
    pub demux_delay_ps: f64,
    pub n_pulses_per_setting: u64,
    pub n_resamples: u32,
}

impl Default for TdmDemuxSweep {
    fn default() -> Self {
        Self {
            length_m: 100.0,
            demux_delay_ps: 225.0,
            n_pulses_per_setting: 50_000_000,
            n_resamples: 50,
        }
    }
}

/// Sweep for the EYE scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EyeSweep {
    pub length_m: f64,
    pub delay_min_ps: f64,
    pub delay_max_ps: f64,
    pub delay_step_ps: f64,
    pub n_pulses_per_point: u64,
}

impl Default for EyeSweep {
    fn default() -> Self {
        Self {
            length_m: 100.0,
            delay_min_ps: -150.0,
            delay_max_ps: 700.0,
            delay_step_ps: 5.0,
            n_pulses_per_point: 5_000_000,
        }
    }
}

/// Top-level run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub switch: SwitchSettings,
    #[serde(default)]
    pub source: SourceSettings,
    #[serde(default)]
    pub noise: NoiseSettings,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contrast: Option<ContrastSweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowSweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub background: Option<BackgroundSweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub switch_tomo: Option<SwitchTomoSweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sep_colors: Option<SepColorsSweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tdm_demux: Option<TdmDemuxSweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eye: Option<EyeSweep>,
}

fn default_seed() -> u64 {
    7
}

impl ExperimentConfig {
    /// Stock configuration for a scenario: calibrated defaults, no sweep
    /// overrides, output directory left for the caller to set.
    pub fn default_for(scenario: Scenario) -> Self {
        Self {
            scenario,
            seed: default_seed(),
            output_dir: None,
            switch: SwitchSettings::default(),
            source: SourceSettings::default(),
            noise: NoiseSettings::default(),
            contrast: None,
            window: None,
            background: None,
            switch_tomo: None,
            sep_colors: None,
            tdm_demux: None,
            eye: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Reject sweep sections that do not belong to the chosen scenario,
    /// and check that the common sections build.
    pub fn validate(&self) -> Result<()> {
        let stray: Vec<&str> = [
            (self.contrast.is_some(), Scenario::Contrast, "contrast"),
            (self.window.is_some(), Scenario::Window, "window"),
            (self.background.is_some(), Scenario::Background, "background"),
            (
                self.switch_tomo.is_some(),
                Scenario::SwitchTomo,
                "switch_tomo",
            ),
            (self.sep_colors.is_some(), Scenario::SepColors, "sep_colors"),
            (self.tdm_demux.is_some(), Scenario::TdmDemux, "tdm_demux"),
            (self.eye.is_some(), Scenario::Eye, "eye"),
        ]
        .into_iter()
        .filter(|(present, owner, _)| *present && *owner != self.scenario)
        .map(|(_, _, name)| name)
        .collect();
        if !stray.is_empty() {
            return Err(ExperimentError::Config(format!(
                "sweep section(s) {stray:?} do not belong to scenario {}",
                self.scenario.tag()
            )));
        }
        self.switch.build()?;
        self.source.build()?;
        self.noise.params(0.0)?;
        Ok(())
    }
}
