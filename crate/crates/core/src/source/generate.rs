//! Pump preparation and pair generation.
//!
//! An unbalanced interferometer splits each pump pulse into two time bins
//! with amplitude ratio sqrt(c1/c2) and distinct polarizations. Four-wave
//! mixing then emits one pair per bin with probability proportional to the
//! squared pump power, carrying a Bell state fixed by the bin polarization:
//! (H+V)/sqrt2 drives Phi+, (H+iV)/sqrt2 drives Phi-. Other pump
//! polarizations are rejected; the general map is not modeled.

use crate::error::{CoreError, Result};
use crate::profile::SampledProfile;
use crate::quantum::{bell_state, ket_d, ket_l, BellKind, PolarizationKet};
use crate::source::stream::{
    EntangledChannel, MultiplexedStream, PumpChannel, SourceConfig, SpatialMode,
};

/// Two pump time bins at t0 and t0 + delta_t, with amplitudes
/// sqrt(c1), sqrt(c2) normalized to c1 + c2 = 1.
pub fn michelson_pump(config: &SourceConfig) -> Result<Vec<PumpChannel>> {
    config.validate()?;
    let r = config.c1_over_c2;
    let c2 = 1.0 / (1.0 + r);
    let c1 = r * c2;
    Ok(vec![
        PumpChannel {
            t_center_ps: config.t0_ps,
            amplitude: c1.sqrt(),
            jones: ket_d(),
        },
        PumpChannel {
            t_center_ps: config.t0_ps + config.delta_t_ps,
            amplitude: c2.sqrt(),
            jones: ket_l(),
        },
    ])
}

/// Pair-emission density for a pump intensity profile: the pointwise
/// square, renormalized to unit area.
pub fn temporal_pair_density(pump_profile: &SampledProfile) -> Result<SampledProfile> {
    pump_profile.squared_normalized()
}

fn pair_state_for(jones: &PolarizationKet) -> Result<PolarizationKet> {
    const MATCH_TOL: f64 = 1e-9;
    for (pump, kind) in [(ket_d(), BellKind::PhiPlus), (ket_l(), BellKind::PhiMinus)] {
        if (jones.inner(&pump).norm() - 1.0).abs() < MATCH_TOL {
            return Ok(bell_state(kind));
        }
    }
    Err(CoreError::UnsupportedPumpPolarization)
}

/// Entangled channels from a prepared pump. Channel weights follow the
/// pair yield, amplitude^4 (power squared), renormalized; zero-amplitude
/// bins are dropped. All channels start in the transmitted-path mode T
/// with pair profiles proportional to the squared pump intensity.
pub fn sfwm_channels(pump: &[PumpChannel], config: &SourceConfig) -> Result<MultiplexedStream> {
    config.validate()?;
    let mut yields = Vec::with_capacity(pump.len());
    for ch in pump {
        if !(ch.amplitude.is_finite() && ch.amplitude >= 0.0) {
            return Err(CoreError::BadParameter {
                name: "amplitude",
                value: ch.amplitude,
            });
        }
        yields.push(ch.amplitude.powi(4));
    }
    let total: f64 = yields.iter().sum();
    if total <= 0.0 {
        return Err(CoreError::ZeroAreaProfile);
    }
    let mut channels = Vec::new();
    for (ch, y) in pump.iter().zip(&yields) {
        if *y == 0.0 {
            continue;
        }
        let intensity = SampledProfile::gaussian(
            ch.t_center_ps,
            config.pump_fwhm_ps,
            config.grid_step_ps,
            6.0,
        )?;
        channels.push(EntangledChannel {
            t_center_ps: ch.t_center_ps,
            weight: y / total,
            pol_state: pair_state_for(&ch.jones)?,
            temporal_profile: temporal_pair_density(&intensity)?,
            spatial_mode: SpatialMode::T,
        });
    }
    MultiplexedStream::new(channels)
}

/// Convenience: the stock two-bin entangled stream for a configuration.
pub fn tdm_stream(config: &SourceConfig) -> Result<MultiplexedStream> {
    sfwm_channels(&michelson_pump(config)?, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::ket_h;

    #[test]
    fn stock_stream_weights_and_states() {
        let cfg = SourceConfig::default();
        let stream = tdm_stream(&cfg).unwrap();
        let ch = stream.channels();
        assert_eq!(ch.len(), 2);
        // c1/c2 = 1.25 -> pair weights 1.25^2 : 1.
        assert!((ch[0].weight - 0.609_756_097_560_975_6).abs() < 1e-12);
        assert!((ch[1].weight - 0.390_243_902_439_024_4).abs() < 1e-12);
        assert!((ch[0].t_center_ps - 225.0).abs() < 1e-12);
        assert!((ch[1].t_center_ps - 525.0).abs() < 1e-12);
        let phi_plus = bell_state(BellKind::PhiPlus);
        let phi_minus = bell_state(BellKind::PhiMinus);
        assert!((ch[0].pol_state.inner(&phi_plus).norm() - 1.0).abs() < 1e-12);
        assert!((ch[1].pol_state.inner(&phi_minus).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pair_profiles_narrow_by_sqrt2() {
        let cfg = SourceConfig::default();
        let stream = tdm_stream(&cfg).unwrap();
        let fwhm = stream.channels()[0].temporal_profile.fwhm().unwrap();
        assert!((fwhm - 100.0 / std::f64::consts::SQRT_2).abs() < 0.5);
        assert!((stream.channels()[0].temporal_profile.area() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn squaring_shrinks_tail_energy() {
        // A 10%-energy exponential tail must carry strictly less of the
        // energy after squaring.
        let probe = crate::switch::tailed_probe(100.0, 0.10, 95.0, (-110.0, 260.0), 0.5).unwrap();
        let squared = temporal_pair_density(&probe).unwrap();
        let tail_fraction = |p: &SampledProfile| {
            let mut tail = 0.0;
            let mut total = 0.0;
            for (i, v) in p.values().iter().enumerate() {
                let t = p.time_at(i);
                total += v;
                if t > 150.0 {
                    tail += v;
                }
            }
            tail / total
        };
        assert!(tail_fraction(&squared) < tail_fraction(&probe));
    }

    #[test]
    fn unsupported_pump_polarization_is_rejected() {
        let cfg = SourceConfig::default();
        let mut pump = michelson_pump(&cfg).unwrap();
        pump[0].jones = ket_h();
        assert!(matches!(
            sfwm_channels(&pump, &cfg),
            Err(CoreError::UnsupportedPumpPolarization)
        ));
    }

    #[test]
    fn zero_amplitude_bin_gives_single_channel() {
        let cfg = SourceConfig::default();
        let mut pump = michelson_pump(&cfg).unwrap();
        pump[1].amplitude = 0.0;
        let stream = sfwm_channels(&pump, &cfg).unwrap();
        assert_eq!(stream.channels().len(), 1);
        assert!((stream.channels()[0].weight - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equal_ratio_gives_equal_weights() {
        let cfg = SourceConfig {
            c1_over_c2: 1.0,
            ..SourceConfig::default()
        };
        let stream = tdm_stream(&cfg).unwrap();
        assert!((stream.channels()[0].weight - 0.5).abs() < 1e-12);
    }
}
