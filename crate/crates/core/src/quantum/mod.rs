//! Two-photon polarization states and entanglement measures.
//!
//! Conventions used throughout:
//! - pair basis order |HH>, |HV>, |VH>, |VV>, signal photon in the first slot;
//! - |D> = (|H>+|V>)/sqrt(2), |A> = (|H>-|V>)/sqrt(2);
//! - |R> = (|H>-i|V>)/sqrt(2), |L> = (|H>+i|V>)/sqrt(2).

pub mod density;
pub mod jones;
pub mod ket;
pub mod metrics;
pub mod random;

pub use density::{
    apply_local, fidelity_to_pure, hermitian_eigenvalues, hermitian_sqrt, kron2, linear_entropy,
    trace_distance, DensityMatrix,
};
pub use jones::JonesOperator;
pub use ket::{
    bell_state, ket_a, ket_d, ket_h, ket_l, ket_r, ket_v, tensor, BellKind, PolarizationKet,
    BELL_KINDS,
};
pub use metrics::{entanglement_metrics, fully_entangled_fraction, tangle, EntanglementMetrics};
