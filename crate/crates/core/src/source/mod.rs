//! Time-multiplexed entangled-pair source.
//!
//! [`michelson_pump`] prepares two pump time bins, [`sfwm_channels`] turns
//! them into an entangled [`MultiplexedStream`], [`demultiplex`] routes the
//! stream through a switching window, and [`project_and_trace`] collapses a
//! spatial mode to a polarization density matrix.

mod demux;
mod generate;
mod stream;

pub use demux::{demultiplex, project_and_trace};
pub use generate::{michelson_pump, sfwm_channels, tdm_stream, temporal_pair_density};
pub use stream::{EntangledChannel, MultiplexedStream, PumpChannel, SourceConfig, SpatialMode};
