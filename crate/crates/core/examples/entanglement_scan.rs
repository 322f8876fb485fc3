//! Entanglement of the ground state as the coupling grows, and the entropy
//! mismatch and trace distance left by reference ramps of varying length.
//!
//!     cargo run --release --example entanglement_scan

use std::fs::File;

use twobody_sta::analysis::{evolve_run, EntanglementConfig, RunSpec, Target};
use twobody_sta::correlations::{entropy, rspdm, two_body_from_eigenstate, UniformGrid};
use twobody_sta::ramps::RampKind;
use twobody_sta::static2b::{eigenstate, RelativeEigenstate};
use twobody_sta::tdse::{Propagator, PropagatorConfig};

fn main() -> twobody_sta::Result<()> {
    let grid = UniformGrid::new(6.0, 241)?;
    for g in [0.0, 1.0, 5.0, 20.0, 40.0, 1e3] {
        let rho = rspdm(&two_body_from_eigenstate(&eigenstate(g, 0)?, &grid)?)?;
        println!("g = {g:>6}: S = {:.5}  lambda_0 = {:.5}", entropy(&rho), rho.eigenvalues()[0]);
    }
    let tg = rspdm(&two_body_from_eigenstate(&RelativeEigenstate::tonks_girardeau(), &grid)?)?;
    println!("hard core: S = {:.5}", entropy(&tg));
    tg.write_lambda_csv(File::create("lambda_tg.csv")?)?;

    let prop = Propagator::new(PropagatorConfig::default())?;
    let ent = EntanglementConfig::default();
    let target = Target::prepare(20.0, &prop, &ent)?;
    println!("{:>5} {:>11} {:>8}", "t_f", "dS", "T_D");
    for k in 0..=12 {
        let t_f = 3.0 + 0.5 * k as f64;
        let r = evolve_run(&RunSpec::new(RampKind::Reference, 0.0, 20.0, t_f), &prop, &ent, None, Some(&target))?.result;
        println!("{t_f:>5} {:>+11.4e} {:>8.4}", r.d_s.unwrap_or(f64::NAN), r.t_d.unwrap_or(f64::NAN));
    }
    Ok(())
}
