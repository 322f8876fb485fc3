//! Tabulates the reference, linear and STA ramps for one target coupling and
//! reports where the STA pulse dips below zero.
//!
//!     cargo run --release --example ramp_shapes [g_f] [t_f]

use std::fs::File;

use twobody_sta::ramps::{write_ramp_csv, Ramp};
use twobody_sta::sta::{AnsatzKernels, StaPulse, TgConvention};
use twobody_sta::static2b::{adiabatic_energy, EnergyOffset};

fn arg(i: usize, default: f64) -> f64 {
    std::env::args().nth(i).and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn main() -> twobody_sta::Result<()> {
    let g_f = arg(1, 20.0);
    let t_f = arg(2, 2.0);
    let ramps = [
        ("reference", Ramp::reference(0.0, g_f, t_f)?),
        ("linear", Ramp::linear(0.0, g_f, t_f)?),
        ("sta", Ramp::from_sta(StaPulse::design(0.0, g_f, t_f)?)),
    ];
    for (name, ramp) in &ramps {
        let rows = ramp.sample(201)?;
        write_ramp_csv(File::create(format!("ramp_{name}.csv"))?, &rows)?;
        let min = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
        let mid = ramp.g(0.5 * t_f)?;
        let e_ad = adiabatic_energy(ramp, 0.5 * t_f, EnergyOffset::Relative)?;
        println!("{name:>9}: g(t_f/2) = {mid:8.4}, min g = {min:8.4}, E_AD(t_f/2) = {e_ad:.6}");
    }

    for t_f in [0.5, 1.0, 2.0, 5.0] {
        let pulse = StaPulse::design(0.0, g_f, t_f)?;
        println!("t_f = {t_f:3}: min g_STA = {:9.4}", pulse.min_g(2001)?);
    }

    // the infinite-coupling pulse diverges at t_f; stop just short of it
    let tg = StaPulse::new(AnsatzKernels::tonks_girardeau(TgConvention::PositiveOverlap), t_f)?;
    for frac in [0.5, 0.9, 0.99] {
        println!("sta-tg g({frac} t_f) = {:.4}", tg.g(frac * t_f)?);
    }
    Ok(())
}
