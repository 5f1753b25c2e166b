use thiserror::Error;

/// Errors surfaced by the physics core.
///
/// Constructors validate their inputs eagerly, so downstream code can assume
/// any value it holds already satisfies the documented invariants.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("amplitudes must be finite and normalized (|norm - 1| = {deviation:.3e})")]
    NotNormalized { deviation: f64 },

    #[error("matrix is not Hermitian within tolerance (max asymmetry {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("trace deviates from one by {deviation:.3e}")]
    BadTrace { deviation: f64 },

    #[error("matrix has a negative eigenvalue {eigenvalue:.3e} below tolerance")]
    NotPositive { eigenvalue: f64 },

    #[error("operator is not unitary within tolerance (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("value must be finite and non-negative: {name} = {value}")]
    BadParameter { name: &'static str, value: f64 },

    #[error("pump inverse group velocity must not be smaller than the signal's")]
    WalkoffOrder,

    #[error("grid step {step_ps} ps too coarse for pump FWHM {fwhm_ps} ps (need step <= fwhm/5)")]
    GridTooCoarse { step_ps: f64, fwhm_ps: f64 },

    #[error("profile must have positive area")]
    ZeroAreaProfile,

    #[error("profile samples must be finite and non-negative")]
    BadProfileSamples,

    #[error("delay list must be non-empty")]
    EmptyDelays,

    #[error("window grid does not cover channel support [{lo:.1}, {hi:.1}] ps")]
    WindowCoverage { lo: f64, hi: f64 },

    #[error("unsupported pump polarization for pair generation")]
    UnsupportedPumpPolarization,

    #[error("channel time bins must be separated by at least 1 ps")]
    BinsTooClose,

    #[error("no population in the requested mode")]
    ZeroModeWeight,

    #[error("fit failed to converge: {context}")]
    FitNonConvergence { context: &'static str },

    #[error("too many bootstrap resamples failed to converge ({failed}/{total})")]
    BootstrapUnstable { failed: usize, total: usize },

    #[error("count record set is incomplete or inconsistent: {context}")]
    BadCountRecords { context: &'static str },

    #[error("csv I/O failed: {0}")]
    Csv(#[from] csv::Error),

    #[error("I/O failed: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
