//! All-optical loop switch: walkoff, cross-phase modulation, routing.
//!
//! Pipeline: [`FiberParams`] fixes the walkoff, [`SwitchConfig`] adds pump
//! and drive level, [`transmission_window`] produces T(t), and the window
//! then feeds probe traces ([`measured_window`], [`contrast`]), per-photon
//! routing ([`route`]), and background estimates ([`raman_expected_per_pulse`]).

mod config;
mod fiber;
mod phase;
mod probe;
mod pump;
mod raman;
mod routing;
mod window;

pub use config::{
    split_energy, SwitchConfig, DEFAULT_EXTINCTION, DEFAULT_GRID_STEP_PS, DEFAULT_PI_ENERGY_NJ,
    DEFAULT_RAMAN_PER_M, DEFAULT_RAMAN_PER_PS, PORT_LOSSES_LONG_DB, PORT_LOSSES_SHORT_DB,
};
pub use fiber::{
    regime, walkoff, FiberParams, Regime, WalkoffBreakdown, DEFAULT_INV_GV_SIGNAL_PS_PER_M,
    DEFAULT_WALKOFF_PS_PER_M,
};
pub use phase::{
    phase_for_walkoff, phase_from_port_powers, phase_profile, transmission_window,
    window_from_phase, PhaseProfile, TransmissionWindow,
};
pub use probe::{
    classical_probe, tailed_probe, DEFAULT_PROBE_FWHM_PS, DEFAULT_PROBE_SPAN_PS,
    DEFAULT_PROBE_TAIL_FRACTION, DEFAULT_PROBE_TAIL_SCALE_PS,
};
pub use pump::{PumpPulse, DEFAULT_PUMP_FWHM_PS};
pub use raman::{raman_counts, raman_expected_per_pulse};
pub use routing::{route, RoutedPort};
pub use window::{
    contrast, deconvolve_window, intrinsic_width_ps, measured_window, ContrastReport,
    DeconvolutionFit, WindowScan,
};
