//! Stochastic routing of individual photons through the loop.

use rand::Rng;

use crate::error::{CoreError, Result};
use crate::rng::SimRng;
use crate::switch::config::SwitchConfig;
use crate::switch::phase::TransmissionWindow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoutedPort {
    /// Switched out through the transmit port.
    Transmit,
    /// Returned through the reflect port.
    Reflect,
    /// Absorbed in the port insertion loss.
    Lost,
}

/// Route one photon arriving at the given time: a Bernoulli port draw at
/// the window transmission, then a survival draw against that port's
/// insertion loss.
pub fn route(
    config: &SwitchConfig,
    window: &TransmissionWindow,
    arrival_ps: f64,
    rng: &mut SimRng,
) -> Result<RoutedPort> {
    if !arrival_ps.is_finite() {
        return Err(CoreError::BadParameter {
            name: "arrival_ps",
            value: arrival_ps,
        });
    }
    let p_t = window.transmission_at(arrival_ps);
    let (port, loss_db) = if rng.gen::<f64>() < p_t {
        (RoutedPort::Transmit, config.loss_transmit_db)
    } else {
        (RoutedPort::Reflect, config.loss_reflect_db)
    };
    if rng.gen::<f64>() < config.survival(loss_db) {
        Ok(port)
    } else {
        Ok(RoutedPort::Lost)
    }
}
