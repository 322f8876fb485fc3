//! Fits exponential decay rates to a results table such as the one written by
//! `irreversible_work_sweep`.
//!
//!     cargo run --release --example decay_rates [results.csv]

use std::fs::File;

use twobody_sta::analysis::{fit_results, read_results_csv, DEFAULT_FIT_WINDOW};
use twobody_sta::ramps::RampKind;

fn main() -> twobody_sta::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "results.csv".into());
    let rows = read_results_csv(File::open(&path)?)?;
    let mut groups: Vec<(RampKind, f64)> = Vec::new();
    for r in &rows {
        if !groups.contains(&(r.spec.kind, r.spec.g_f)) {
            groups.push((r.spec.kind, r.spec.g_f));
        }
    }
    for (kind, g_f) in groups {
        match fit_results(&rows, kind, g_f, DEFAULT_FIT_WINDOW) {
            Ok(fit) => println!("{kind:>9} g_f = {g_f:>5}: alpha = {:.4}  r2 = {:.4}  ({} points)", fit.alpha, fit.r2, fit.used),
            Err(e) => println!("{kind:>9} g_f = {g_f:>5}: {e}"),
        }
    }
    Ok(())
}
