//! Ground-state energy of the relative motion across the interaction range,
//! with the spectral and finite-difference cross-checks at one coupling.
//!
//!     cargo run --release --example ground_energy_curve [out.csv]

use std::fs::File;

use twobody_sta::static2b::{energy_residual, even_energy, ground_energy_curve};
use twobody_sta::tdse::extrapolated_ground_energy;
use twobody_sta::tdse::grid::grid_ground_energy_extrapolated;

fn main() -> twobody_sta::Result<()> {
    let mut gs: Vec<f64> = (0..=40).map(|k| -1.0 + 0.25 * k as f64).collect();
    gs.extend([20.0, 40.0, 100.0, 1e3, 1e4]);
    let curve = ground_energy_curve(&gs)?;
    let path = std::env::args().nth(1).unwrap_or_else(|| "ground_energy.csv".into());
    curve.write_csv(File::create(&path)?)?;
    println!("wrote {} couplings to {path}", gs.len());

    for g in [0.0, 1.0, 5.0, 20.0, 40.0, 1e4] {
        let e = even_energy(g, 0)?;
        println!("g = {g:>8}: E0 = {e:.12}  residual {:.1e}", energy_residual(g, e)?.abs());
    }

    let g = 20.0;
    let exact = even_energy(g, 0)?;
    let spectral = extrapolated_ground_energy(g, &[64, 128, 256, 512])?;
    let grid = grid_ground_energy_extrapolated(g, 10.0, &[0.02, 0.01, 0.005])?;
    println!("g = {g}: exact {exact:.8}, spectral {spectral:.8}, grid {grid:.8}");
    Ok(())
}
