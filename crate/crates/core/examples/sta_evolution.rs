//! Propagates one STA ramp and one reference ramp and compares the work
//! left in the system, the entropy mismatch and the trace distance.
//!
//!     cargo run --release --example sta_evolution [g_f] [t_f]

use twobody_sta::analysis::{evolve, EvolveOptions, RunSpec};
use twobody_sta::ramps::RampKind;

fn arg(i: usize, default: f64) -> f64 {
    std::env::args().nth(i).and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn main() -> twobody_sta::Result<()> {
    let g_f = arg(1, 20.0);
    let t_f = arg(2, 5.0);
    let opts = EvolveOptions::default();
    for kind in [RampKind::Sta, RampKind::Reference, RampKind::Linear] {
        let out = evolve(&RunSpec::new(kind, 0.0, g_f, t_f), &opts)?;
        let r = &out.result;
        let last = out.snapshots.last().expect("trajectory has a final snapshot");
        println!(
            "{kind:>9}: W_irr = {:.3e}  dS = {:+.3e}  T_D = {:.4}  norm drift = {:.1e}",
            r.w_irr,
            r.d_s.unwrap_or(f64::NAN),
            r.t_d.unwrap_or(f64::NAN),
            (last.norm - 1.0).abs()
        );
    }
    Ok(())
}
