//! Figures of merit and experiment orchestration: irreversible work,
//! entanglement against the target, sweeps over ramp duration or final
//! coupling, and exponential decay-rate fits.

use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::correlations::{rspdm, two_body_from_wave, EntanglementReport, Rspdm, UniformGrid};
use crate::error::{Error, Result};
use crate::numerics::fit_line;
use crate::ramps::{Ramp, RampKind};
use crate::sta::{AnsatzKernels, StaPulse, TgConvention};
use crate::static2b::even_energy;
use crate::tdse::{CouplingScheme, Propagator, PropagatorConfig, Snapshot, WaveState};

/// Results CSV header.
pub const RESULTS_HEADER: [&str; 13] = ["kind", "g_i", "g_f", "t_f", "E_tf", "E_T", "W_irr", "S_tf", "S_T", "dS", "T_D", "n_max", "dt"];

/// Work values at or below this are excluded from log fits.
pub const WORK_FLOOR: f64 = 1e-10;

/// Default decay-fit window in `t_f`.
pub const DEFAULT_FIT_WINDOW: [f64; 2] = [1.5, 8.0];

/// Samples used when scanning a pulse for negative couplings.
const NEGATIVE_SCAN_SAMPLES: usize = 2001;

pub fn irreversible_work(e_tf: f64, e_t: f64) -> f64 {
    e_tf - e_t
}

/// A single ramp to propagate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub kind: RampKind,
    #[serde(default)]
    pub g_i: f64,
    pub g_f: f64,
    pub t_f: f64,
}

impl RunSpec {
    pub fn new(kind: RampKind, g_i: f64, g_f: f64, t_f: f64) -> Self {
        Self { kind, g_i, g_f, t_f }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g_i.is_finite() && self.t_f.is_finite() && self.t_f > 0.0) {
            return Err(Error::Config(format!("run needs finite g_i and t_f > 0, got g_i = {}, t_f = {}", self.g_i, self.t_f)));
        }
        if self.g_f.is_nan() || (self.g_f.is_infinite() && self.kind != RampKind::StaTg) {
            return Err(Error::Config(format!("g_f must be finite for {} ramps", self.kind)));
        }
        match self.kind {
            RampKind::Constant if self.g_i != self.g_f => {
                Err(Error::Config(format!("constant ramp needs g_i == g_f, got {} and {}", self.g_i, self.g_f)))
            }
            RampKind::Tabulated => Err(Error::Config("tabulated ramps are not part of run specifications".into())),
            _ => Ok(()),
        }
    }

    /// Final coupling of the target state (`inf` for `sta-tg`).
    pub fn target_coupling(&self) -> f64 {
        if self.kind == RampKind::StaTg {
            f64::INFINITY
        } else {
            self.g_f
        }
    }

    /// Builds the ramp, reusing `kernels` for shortcut pulses when given.
    pub fn ramp(&self, kernels: Option<&AnsatzKernels>) -> Result<Ramp> {
        self.validate()?;
        match self.kind {
            RampKind::Reference => Ramp::reference(self.g_i, self.g_f, self.t_f),
            RampKind::Linear => Ramp::linear(self.g_i, self.g_f, self.t_f),
            RampKind::Constant => Ramp::constant(self.g_i, self.t_f),
            RampKind::Sta => {
                let k = match kernels {
                    Some(k) => *k,
                    None => AnsatzKernels::compute(self.g_i, self.g_f)?,
                };
                Ok(Ramp::from_sta(StaPulse::new(k, self.t_f)?))
            }
            RampKind::StaTg => {
                Ok(Ramp::from_sta(StaPulse::new(AnsatzKernels::tonks_girardeau(TgConvention::default()), self.t_f)?))
            }
            RampKind::Tabulated => unreachable!("rejected by validate"),
        }
    }
}

/// Real-space grid used for the density matrices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EntanglementConfig {
    pub enabled: bool,
    pub half_width: f64,
    pub points: usize,
}

impl Default for EntanglementConfig {
    fn default() -> Self {
        Self { enabled: true, half_width: 6.0, points: 241 }
    }
}

impl EntanglementConfig {
    pub fn grid(&self) -> Result<UniformGrid> {
        UniformGrid::new(self.half_width, self.points)
    }
}

/// Numerical settings shared by every run of an experiment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveOptions {
    pub propagator: PropagatorConfig,
    pub entanglement: EntanglementConfig,
}

/// Adiabatic target at the final coupling.
#[derive(Clone, Debug)]
pub struct Target {
    pub g_f: f64,
    pub energy: f64,
    pub state: WaveState,
    pub rho: Option<Rspdm>,
}

impl Target {
    /// `E_T` from the exact relative spectrum; the density matrix comes from
    /// the model ground state so that dynamic and target states share the
    /// same truncation.
    pub fn prepare(g_f: f64, prop: &Propagator, ent: &EntanglementConfig) -> Result<Self> {
        let (energy, state) = if g_f.is_infinite() {
            if prop.config.coupling != CouplingScheme::Renormalized {
                return Err(Error::InvalidArgument("an infinite final coupling needs the renormalized scheme".into()));
            }
            (1.5, prop.ground_state(f64::INFINITY)?)
        } else {
            (even_energy(g_f, 0)?, prop.ground_state(g_f)?)
        };
        let rho = if ent.enabled { Some(rspdm(&two_body_from_wave(&state, &ent.grid()?)?)?) } else { None };
        Ok(Self { g_f, energy, state, rho })
    }
}

/// Outcome of one propagation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub spec: RunSpec,
    pub e_tf: f64,
    pub e_t: f64,
    pub w_irr: f64,
    /// Entanglement columns; `None` when the density matrices were skipped.
    pub s_tf: Option<f64>,
    pub s_t: Option<f64>,
    pub d_s: Option<f64>,
    pub t_d: Option<f64>,
    pub n_max: usize,
    pub dt: f64,
    /// The pulse takes negative values somewhere in `(0, t_f)`.
    #[serde(default)]
    pub negative_g: bool,
}

impl RunResult {
    fn record(&self) -> [String; 13] {
        let s = self;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        [
            s.spec.kind.to_string(),
            s.spec.g_i.to_string(),
            s.spec.g_f.to_string(),
            s.spec.t_f.to_string(),
            s.e_tf.to_string(),
            s.e_t.to_string(),
            s.w_irr.to_string(),
            opt(s.s_tf),
            opt(s.s_t),
            opt(s.d_s),
            opt(s.t_d),
            s.n_max.to_string(),
            s.dt.to_string(),
        ]
    }
}

/// Full output of [`evolve_run`].
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub result: RunResult,
    pub snapshots: Vec<Snapshot>,
    pub final_state: WaveState,
    pub rho: Option<Rspdm>,
}

/// Propagates one ramp from the ground state at `g_i` and compares the final
/// state with the target at `g_f`.
pub fn evolve_run(spec: &RunSpec, prop: &Propagator, ent: &EntanglementConfig, kernels: Option<&AnsatzKernels>, target: Option<&Target>) -> Result<RunOutput> {
    let ramp = spec.ramp(kernels)?;
    let negative_g = match ramp.sta_pulse() {
        Some(p) => p.has_negative_g(NEGATIVE_SCAN_SAMPLES)?,
        None => false,
    };
    let own;
    let target = match target {
        Some(t) => t,
        None => {
            own = Target::prepare(spec.target_coupling(), prop, ent)?;
            &own
        }
    };
    let start = prop.ground_state(spec.g_i)?;
    let trajectory = prop.evolve(&ramp, start)?;
    let (final_state, snapshots) = (trajectory.final_state, trajectory.snapshots);
    let e_tf = prop.energy(&final_state, spec.target_coupling())?;
    let (rho, report) = match &target.rho {
        Some(rho_t) => {
            let rho = rspdm(&two_body_from_wave(&final_state, rho_t.grid())?)?;
            let rep = EntanglementReport::compare(&rho, rho_t)?;
            (Some(rho), Some(rep))
        }
        None => (None, None),
    };
    let (s_tf, s_t, d_s, t_d) = match report {
        Some(r) => (Some(r.entropy), Some(r.target_entropy), Some(r.delta_entropy), Some(r.trace_distance)),
        None => (None, None, None, None),
    };
    let result = RunResult {
        spec: *spec,
        e_tf,
        e_t: target.energy,
        w_irr: irreversible_work(e_tf, target.energy),
        s_tf,
        s_t,
        d_s,
        t_d,
        n_max: prop.config.n_max,
        dt: prop.config.dt,
        negative_g,
    };
    Ok(RunOutput { result, snapshots, final_state, rho })
}

/// Convenience wrapper building the propagator from `opts`.
pub fn evolve(spec: &RunSpec, opts: &EvolveOptions) -> Result<RunOutput> {
    let prop = Propagator::new(opts.propagator)?;
    evolve_run(spec, &prop, &opts.entanglement, None, None)
}

/// Cartesian product `kinds x g_fs x t_fs` in that nesting order.
pub fn plan_sweep(kinds: &[RampKind], g_i: f64, g_fs: &[f64], t_fs: &[f64]) -> Vec<RunSpec> {
    let mut out = Vec::with_capacity(kinds.len() * g_fs.len() * t_fs.len());
    for &kind in kinds {
        for &g_f in g_fs {
            for &t_f in t_fs {
                out.push(RunSpec::new(kind, g_i, g_f, t_f));
            }
        }
    }
    out
}

/// A sweep row that failed, kept in plan order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowFailure {
    pub index: usize,
    pub spec: RunSpec,
    pub exit_code: i32,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct SweepOutcome {
    pub results: Vec<RunResult>,
    pub failures: Vec<RowFailure>,
}

impl SweepOutcome {
    pub fn warnings(&self) -> Vec<String> {
        self.results
            .iter()
            .filter(|r| r.negative_g)
            .map(|r| format!("{} pulse g_f = {}, t_f = {} takes negative values", r.spec.kind, r.spec.g_f, r.spec.t_f))
            .collect()
    }
}

fn key(x: f64) -> u64 {
    x.to_bits()
}

/// Runs every spec with `jobs` worker threads. Shortcut kernels and targets
/// are computed once per distinct coupling pair; results come back in plan
/// order regardless of completion order.
pub fn sweep(specs: &[RunSpec], opts: &EvolveOptions, jobs: usize) -> Result<SweepOutcome> {
    use rayon::prelude::*;

    let prop = Propagator::new(opts.propagator)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;

    let mut pairs: Vec<(f64, f64)> = specs.iter().filter(|s| s.kind == RampKind::Sta).map(|s| (s.g_i, s.g_f)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pairs.dedup();
    let mut finals: Vec<f64> = specs.iter().filter(|s| s.validate().is_ok()).map(|s| s.target_coupling()).collect();
    finals.sort_by(f64::total_cmp);
    finals.dedup();

    pool.install(|| {
        // failed entries are left out; the affected rows then reproduce the error themselves
        let kernels: HashMap<(u64, u64), AnsatzKernels> = pairs
            .par_iter()
            .filter_map(|&(a, b)| AnsatzKernels::compute(a, b).ok().map(|k| ((key(a), key(b)), k)))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        let targets: HashMap<u64, Target> = finals
            .par_iter()
            .filter_map(|&g| Target::prepare(g, &prop, &opts.entanglement).ok().map(|t| (key(g), t)))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();

        let rows: Vec<Result<RunResult>> = specs
            .par_iter()
            .map(|spec| {
                spec.validate()?;
                let k = if spec.kind == RampKind::Sta { kernels.get(&(key(spec.g_i), key(spec.g_f))) } else { None };
                let target = targets.get(&key(spec.target_coupling()));
                Ok(evolve_run(spec, &prop, &opts.entanglement, k, target)?.result)
            })
            .collect();

        let mut out = SweepOutcome::default();
        for (index, (spec, row)) in specs.iter().zip(rows).enumerate() {
            match row {
                Ok(r) => out.results.push(r),
                Err(e) => out.failures.push(RowFailure { index, spec: *spec, exit_code: e.exit_code(), message: e.to_string() }),
            }
        }
        Ok(out)
    })
}

/// Exponential fit `W_irr ~ exp(intercept - alpha t_f)` over a window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub alpha: f64,
    pub intercept: f64,
    pub r2: f64,
    pub window: [f64; 2],
    /// Number of points entering the regression.
    #[serde(skip)]
    pub used: usize,
    /// `t_f` of in-window points dropped for `W_irr <= WORK_FLOOR`.
    #[serde(skip)]
    pub excluded: Vec<f64>,
}

/// Least-squares line through `(t_f, ln W_irr)` for points inside `window`.
pub fn fit_decay_rate(points: &[(f64, f64)], window: [f64; 2]) -> Result<DecayFit> {
    if !(window[0] < window[1]) {
        return Err(Error::InvalidArgument(format!("empty fit window [{}, {}]", window[0], window[1])));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut excluded = Vec::new();
    for &(t, w) in points.iter().filter(|(t, _)| (window[0]..=window[1]).contains(t)) {
        if w > WORK_FLOOR {
            xs.push(t);
            ys.push(w.ln());
        } else {
            excluded.push(t);
        }
    }
    if xs.len() < 4 {
        return Err(Error::InsufficientPoints { needed: 4, found: xs.len() });
    }
    let line = fit_line(&xs, &ys).ok_or_else(|| Error::InvalidArgument("fit points share a single t_f".into()))?;
    Ok(DecayFit { alpha: -line.slope, intercept: line.intercept, r2: line.r2, window, used: xs.len(), excluded })
}

/// Fit for the rows of one ramp kind and final coupling.
pub fn fit_results(results: &[RunResult], kind: RampKind, g_f: f64, window: [f64; 2]) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> =
        results.iter().filter(|r| r.spec.kind == kind && r.spec.g_f == g_f).map(|r| (r.spec.t_f, r.w_irr)).collect();
    fit_decay_rate(&pts, window)
}

pub fn write_results_csv<W: Write>(w: W, rows: &[RunResult]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(RESULTS_HEADER)?;
    for r in rows {
        out.write_record(r.record())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_results_csv<R: Read>(r: R) -> Result<Vec<RunResult>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != RESULTS_HEADER {
        return Err(Error::Config(format!("unexpected results header: {}", header.join(","))));
    }
    let num = |s: &str, line: usize| -> Result<f64> {
        s.parse::<f64>().map_err(|_| Error::Config(format!("line {line}: cannot parse '{s}' as a number")))
    };
    let opt = |s: &str, line: usize| -> Result<Option<f64>> { if s.is_empty() { Ok(None) } else { num(s, line).map(Some) } };
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let kind: RampKind = rec[0].parse()?;
        let n_max = rec[11].parse::<usize>().map_err(|_| Error::Config(format!("line {line}: bad n_max '{}'", &rec[11])))?;
        rows.push(RunResult {
            spec: RunSpec::new(kind, num(&rec[1], line)?, num(&rec[2], line)?, num(&rec[3], line)?),
            e_tf: num(&rec[4], line)?,
            e_t: num(&rec[5], line)?,
            w_irr: num(&rec[6], line)?,
            s_tf: opt(&rec[7], line)?,
            s_t: opt(&rec[8], line)?,
            d_s: opt(&rec[9], line)?,
            t_d: opt(&rec[10], line)?,
            n_max,
            dt: num(&rec[12], line)?,
            negative_g: false,
        });
    }
    Ok(rows)
}
