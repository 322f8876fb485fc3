//! Runs the same ramp through the spectral propagator and the
//! finite-difference oracle and compares the final energies.
//!
//!     cargo run --release --example grid_cross_check [t_f]

use twobody_sta::ramps::Ramp;
use twobody_sta::sta::StaPulse;
use twobody_sta::tdse::grid::{grid_propagate, GridConfig};
use twobody_sta::tdse::{propagate, Propagator, PropagatorConfig};

fn main() -> twobody_sta::Result<()> {
    let t_f = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3.0);
    let g_f = 20.0;
    let cfg = PropagatorConfig::default();
    let prop = Propagator::new(cfg)?;
    for (name, ramp) in [("sta", Ramp::from_sta(StaPulse::design(0.0, g_f, t_f)?)), ("reference", Ramp::reference(0.0, g_f, t_f)?)] {
        let spectral = prop.energy(&propagate(&ramp, &cfg)?.final_state, g_f)?;
        let run = grid_propagate(&ramp, &GridConfig::default())?;
        println!(
            "{name:>9}: spectral E = {spectral:.6}  grid E = {:.6}  grid W = {:.4e}  odd mass = {:.1e}",
            run.energy,
            run.irreversible_work(),
            run.odd_mass
        );
    }
    Ok(())
}
