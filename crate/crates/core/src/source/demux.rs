//! Demultiplexing the stream through the switch and collapsing to a
//! polarization state.

use crate::error::{CoreError, Result};
use crate::quantum::DensityMatrix;
use crate::source::stream::{EntangledChannel, MultiplexedStream, SpatialMode};
use crate::switch::TransmissionWindow;

/// Route every channel through the switching window: a channel with
/// capture p ends up as a T-mode part of weight w*p and an R-mode part of
/// weight w*(1-p). Zero-weight parts are dropped. The window's sampled
/// grid must cover every channel profile; extend it first (the floor
/// extension is explicit, not implied).
pub fn demultiplex(
    stream: &MultiplexedStream,
    window: &TransmissionWindow,
) -> Result<MultiplexedStream> {
    let grid = window.profile();
    let mut out: Vec<EntangledChannel> = Vec::with_capacity(2 * stream.channels().len());
    for ch in stream.channels() {
        let lo = ch.temporal_profile.t0_ps();
        let hi = ch.temporal_profile.t_end_ps();
        if grid.t0_ps() > lo || grid.t_end_ps() < hi {
            return Err(CoreError::WindowCoverage { lo, hi });
        }
        let p = ch
            .temporal_profile
            .overlap_with(|t| window.transmission_at(t))
            .clamp(0.0, 1.0);
        for (mode, part) in [(SpatialMode::T, p), (SpatialMode::R, 1.0 - p)] {
            let weight = ch.weight * part;
            if weight > 0.0 {
                out.push(EntangledChannel {
                    spatial_mode: mode,
                    weight,
                    ..ch.clone()
                });
            }
        }
    }
    MultiplexedStream::new(out)
}

/// Project onto one spatial mode and trace out time: distinct bins are
/// orthogonal, so the result is the weight-renormalized mixture of the
/// branch polarization states in that mode.
pub fn project_and_trace(stream: &MultiplexedStream, mode: SpatialMode) -> Result<DensityMatrix> {
    let parts: Vec<(f64, crate::quantum::PolarizationKet)> = stream
        .channels()
        .iter()
        .filter(|ch| ch.spatial_mode == mode && ch.weight > 0.0)
        .map(|ch| (ch.weight, ch.pol_state.clone()))
        .collect();
    if parts.is_empty() {
        return Err(CoreError::ZeroModeWeight);
    }
    DensityMatrix::mixture(&parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::SampledProfile;
    use crate::quantum::{bell_state, fully_entangled_fraction, BellKind};
    use crate::source::generate::tdm_stream;
    use crate::source::stream::SourceConfig;
    use crate::switch::{transmission_window, SwitchConfig};

    /// Synthetic top-hat window: T = 1 on [lo, hi], 0 elsewhere.
    fn ideal_window(lo: f64, hi: f64, span: (f64, f64)) -> TransmissionWindow {
        let step = 0.5;
        let n = ((span.1 - span.0) / step).ceil() as usize + 1;
        let values = (0..n)
            .map(|i| {
                let t = span.0 + i as f64 * step;
                if t >= lo && t <= hi {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        TransmissionWindow::from_samples(
            SampledProfile::new(span.0, step, values).unwrap(),
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn ideal_window_separates_the_bins() {
        let stream = tdm_stream(&SourceConfig::default()).unwrap();
        let (lo, hi) = stream.support_ps();
        let window = ideal_window(75.0, 375.0, (lo, hi));
        let out = demultiplex(&stream, &window).unwrap();
        // Early bin fully transmitted, late bin fully reflected.
        let total: f64 = out.channels().iter().map(|c| c.weight).sum();
        assert!((total - 1.0).abs() < 1e-9);
        let rho_t = project_and_trace(&out, SpatialMode::T).unwrap();
        let rho_r = project_and_trace(&out, SpatialMode::R).unwrap();
        // Gaussian bins have ~3e-7 of their mass beyond +-5 sigma, so the
        // split is ideal only up to that tail leakage.
        let phi_plus = DensityMatrix::from_pure(&bell_state(BellKind::PhiPlus));
        let phi_minus = DensityMatrix::from_pure(&bell_state(BellKind::PhiMinus));
        assert!(crate::quantum::trace_distance(&rho_t, &phi_plus).unwrap() < 1e-5);
        assert!(crate::quantum::trace_distance(&rho_r, &phi_minus).unwrap() < 1e-5);
        assert!((fully_entangled_fraction(&rho_t).unwrap() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn multiplexed_projection_is_the_bell_mixture() {
        let stream = tdm_stream(&SourceConfig::default()).unwrap();
        let rho = project_and_trace(&stream, SpatialMode::T).unwrap();
        let fef = fully_entangled_fraction(&rho).unwrap();
        assert!((fef - 0.609_756_097_560_975_6).abs() < 1e-6, "fef = {fef}");
        // Nothing sits in R yet.
        assert!(matches!(
            project_and_trace(&stream, SpatialMode::R),
            Err(CoreError::ZeroModeWeight)
        ));
    }

    #[test]
    fn opaque_window_reflects_everything() {
        let stream = tdm_stream(&SourceConfig::default()).unwrap();
        let (lo, hi) = stream.support_ps();
        let window = ideal_window(1e6, 2e6, (lo, hi)); // T = 0 over the stream
        let out = demultiplex(&stream, &window).unwrap();
        assert!(out
            .channels()
            .iter()
            .all(|c| c.spatial_mode == SpatialMode::R));
        let total: f64 = out.channels().iter().map(|c| c.weight).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn real_window_at_the_demux_delay() {
        // A 170-ps window opened on the early bin: p1 > 0.99 needs more
        // walkoff than 100 m gives, but the capture split is still sharp.
        let stream = tdm_stream(&SourceConfig::default()).unwrap();
        let (lo, hi) = stream.support_ps();
        let cfg = SwitchConfig::for_length(200.0).unwrap();
        let window = transmission_window(&cfg)
            .unwrap()
            .shifted(225.0)
            .extended_to(lo, hi)
            .unwrap();
        let out = demultiplex(&stream, &window).unwrap();
        let w_t1: f64 = out
            .channels()
            .iter()
            .filter(|c| c.spatial_mode == SpatialMode::T && (c.t_center_ps - 225.0).abs() < 1.0)
            .map(|c| c.weight)
            .sum();
        let w_t2: f64 = out
            .channels()
            .iter()
            .filter(|c| c.spatial_mode == SpatialMode::T && (c.t_center_ps - 525.0).abs() < 1.0)
            .map(|c| c.weight)
            .sum();
        let p1 = w_t1 / 0.609_756_097_560_975_6;
        let p2 = w_t2 / 0.390_243_902_439_024_4;
        assert!(p1 > 0.99, "p1 = {p1}");
        assert!(p2 < 0.02, "p2 = {p2}");
    }

    #[test]
    fn uncovered_stream_is_an_error() {
        let stream = tdm_stream(&SourceConfig::default()).unwrap();
        let cfg = SwitchConfig::for_length(100.0).unwrap();
        // Shifted onto the early bin but never extended: grid too short.
        let window = transmission_window(&cfg).unwrap().shifted(225.0);
        assert!(matches!(
            demultiplex(&stream, &window),
            Err(CoreError::WindowCoverage { .. })
        ));
    }
}
