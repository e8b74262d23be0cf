//! Canned scenarios used by the examples, benchmarks and verification suites.

use crate::compliance::Scenario;
use crate::interference::{fspl, Geometry, InjectionMode, InterfererSpec, PropagationModel};
use crate::units::m_to_ft;

/// False altitude targeted by the coherent-tone scenarios, ft (500 m).
pub const FALSE_ALTITUDE_FT: f64 = 500.0 / 0.3048;

/// Clean installation: filter fitted and compensated, no interferers.
pub fn clean() -> Scenario {
    Scenario::default()
}

/// Spurious emitter on the ground below the aircraft whose tone arrives `above_echo_db`
/// stronger than the terrain echo (both measured at the antenna, before any filter), injected
/// coherently at [`FALSE_ALTITUDE_FT`].
///
/// Path loss is evaluated at the chirp center so the tone-to-echo ratio is the same at every
/// altitude: the emitter is at distance `h`, the echo travels `2h`.
pub fn coherent_tone(base: &Scenario, tone_hz: f64, above_echo_db: f64) -> Scenario {
    let mut s = base.clone();
    let fc = s.chirp.center_frequency_hz;
    // ratio = level - fspl(h) - (tx - fspl(2h) - refl) = level - tx + refl + 20 log10(2)
    let two_way_extra = fspl(2.0, fc).expect("positive") - fspl(1.0, fc).expect("positive");
    let level = s.chirp.tx_power_dbm - s.terrain_reflectivity_loss_db - two_way_extra + above_echo_db;
    let mut tone = InterfererSpec::spurious_tone(tone_hz, level, Geometry::GroundBelow);
    tone.name = "coherent-spurious".into();
    tone.injection = InjectionMode::Coherent {
        false_altitude_ft: FALSE_ALTITUDE_FT,
    };
    s.interferers.push(tone);
    s.propagation = PropagationModel {
        carrier_for_loss_hz: Some(fc),
        ..s.propagation
    };
    s
}

/// US C-band base station 300 m away whose unfiltered power at the LNA sits
/// `excess_db` above the receiver blocking threshold.
pub fn fundamental_blocker(base: &Scenario, excess_db: f64) -> Scenario {
    let mut s = base.clone();
    let mut bs = InterfererSpec::us_fundamental(300.0);
    bs.emission_band = s.band_plan.us_5g;
    let carrier = s.propagation.carrier_for_loss_hz.unwrap_or(bs.emission_band.center());
    bs.eirp_dbm = s.receiver.blocking_threshold_dbm + excess_db + fspl(300.0, carrier).expect("positive");
    s.interferers.push(bs);
    s
}

/// Altitudes used by the quick sweep examples, ft.
pub fn spot_altitudes_ft() -> Vec<f64> {
    vec![10.0, 50.0, 100.0, 200.0, 500.0, 1000.0, 2500.0]
}

/// Noiseless altitude grid used for oracle agreement, ft.
pub fn oracle_grid_ft() -> Vec<f64> {
    [1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 760.0].map(m_to_ft).to_vec()
}
