//! Two-photon polarization tomography.
//!
//! The pipeline runs in four stages, each usable on its own:
//!
//! 1. [`settings`]: the canonical 36-setting analyzer grid (QWP + HWP +
//!    polarizer per arm) and the states those angles analyze.
//! 2. [`counts`]: Poisson counting with detector efficiency, dark and
//!    background floors, and unbiased accidental subtraction.
//! 3. [`mle`]: maximum-likelihood reconstruction over the positive cone,
//!    seeded by linear inversion, with [`bootstrap`] uncertainties.
//! 4. [`csv`]: a flat acquisition format for interchange with external
//!    count records.

pub mod bootstrap;
pub mod counts;
pub mod csv;
pub mod mle;
pub mod settings;
pub mod waveplates;

pub use bootstrap::uncertainties_mc;
pub use counts::{
    expected_rates, simulate_counts, subtract_accidentals, CountRecord, ExpectedRates,
    NoiseParams,
};
pub use csv::{
    read_count_records, read_count_records_file, write_count_records, write_count_records_file,
};
pub use mle::{mle_reconstruct, MetricUncertainties, ReconstructionResult};
pub use settings::{standard_settings, AnalyzerSetting, BASIS_ANGLES_DEG, BASIS_LABELS};
pub use waveplates::{jones_hwp, jones_qwp};
