//! Irreversible work of STA and reference ramps over a grid of durations and
//! final couplings, written as one results table.
//!
//!     cargo run --release --example irreversible_work_sweep [jobs]

use std::fs::File;

use twobody_sta::analysis::{plan_sweep, sweep, write_results_csv, EntanglementConfig, EvolveOptions};
use twobody_sta::ramps::RampKind;

fn main() -> twobody_sta::Result<()> {
    let jobs = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let t_fs: Vec<f64> = (2..=10).map(f64::from).collect();
    let specs = plan_sweep(&[RampKind::Sta, RampKind::Reference], 0.0, &[5.0, 20.0, 40.0], &t_fs);
    // work only; the entanglement pipeline is exercised by entanglement_scan
    let opts = EvolveOptions { entanglement: EntanglementConfig { enabled: false, ..Default::default() }, ..Default::default() };
    let out = sweep(&specs, &opts, jobs)?;
    for f in &out.failures {
        eprintln!("row {} failed: {}", f.index, f.message);
    }
    write_results_csv(File::create("results.csv")?, &out.results)?;

    println!("{:>6} {:>6} {:>12} {:>12}", "g_f", "t_f", "W_sta", "W_ref");
    let work = |kind, g_f: f64, t_f: f64| {
        out.results.iter().find(|r| r.spec.kind == kind && r.spec.g_f == g_f && r.spec.t_f == t_f).map(|r| r.w_irr)
    };
    for g_f in [5.0, 20.0, 40.0] {
        for &t_f in &t_fs {
            let (s, r) = (work(RampKind::Sta, g_f, t_f), work(RampKind::Reference, g_f, t_f));
            println!("{g_f:>6} {t_f:>6} {:>12.4e} {:>12.4e}", s.unwrap_or(f64::NAN), r.unwrap_or(f64::NAN));
        }
    }
    for w in out.warnings() {
        println!("warning: {w}");
    }
    Ok(())
}
