//! Fixtures shared by the benchmarks under `benches/`.

use ralt_core::compliance::Scenario;
use ralt_core::scenarios;

/// Clean installation with a US fundamental blocker and a 3.9 GHz coherent spurious tone, so
/// every stage of the interference path does work.
pub fn busy_scenario() -> Scenario {
    let s = scenarios::fundamental_blocker(&scenarios::clean(), 40.0);
    scenarios::coherent_tone(&s, 3.9e9, 20.0)
}

/// `base` reduced to the spot altitudes with `trials` trials each.
pub fn small_sweep(base: &Scenario, trials: usize) -> Scenario {
    let mut s = base.clone();
    s.altitudes_ft = scenarios::spot_altitudes_ft();
    s.trials_per_point = trials;
    s
}
