//! Physics core for a deterministic simulator of an all-optical fiber
//! Sagnac-loop switch operating on single photons and entangled pairs.
//!
//! The crate is organized around four stages of the bench:
//! - [`quantum`]: polarization states, Bell pairs, entanglement measures;
//! - [`switch`]: pump-probe walkoff, switching-window shape, routing, noise;
//! - [`source`]: time-multiplexed entangled-pair source and demultiplexing;
//! - [`tomo`]: analyzer settings, coincidence counting, state reconstruction.
//!
//! Everything that draws randomness takes an explicit RNG so that a given
//! seed reproduces a run bit for bit.

pub mod error;
pub mod optimize;
pub mod profile;
pub mod quantum;
pub mod rng;
pub mod source;
pub mod switch;
pub mod tomo;

pub use error::{CoreError, Result};
pub use profile::SampledProfile;
