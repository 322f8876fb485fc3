//! Command-line front end.
//!
//! Every subcommand reads a JSON [`ExperimentConfig`], writes CSV/JSON files
//! into an output directory and finishes with a `manifest.json` describing
//! the run. A directory whose manifest matches the current configuration and
//! code version is left untouched unless `--force` is given; an interrupted
//! or partially failed sweep resumes from the rows already on disk.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs;
use std::hash::{Hash, Hasher};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::{
    evolve_run, fit_decay_rate, plan_sweep, read_results_csv, sweep, write_results_csv, EvolveOptions, RowFailure, RunResult,
    RunSpec, Target, DEFAULT_FIT_WINDOW,
};
use crate::error::{Error, Result};
use crate::ramps::{write_ramp_csv, Ramp, RampKind};
use crate::sta::{AnsatzKernels, StaPulse, TgConvention};
use crate::static2b::{even_energy, ground_energy_curve, EnergyOffset};
use crate::tdse::{Propagator, PropagatorConfig};

pub const SCHEMA_VERSION: u32 = 1;

/// Code version recorded in manifests.
pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Parser)]
#[command(name = "twobody-sta", version, about = "Interaction ramps for two trapped bosons with contact interactions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground-state energy E0(g) of the relative motion.
    StaticCurve(CommonArgs),
    /// Tabulate an interaction ramp g(t) and optionally E_AD(t).
    Ramp(CommonArgs),
    /// Propagate a single ramp and report work and entanglement.
    Evolve(CommonArgs),
    /// Propagate a grid of ramps (kinds x g_f x t_f).
    Sweep(CommonArgs),
    /// Fit exponential decay rates to a results table.
    FitAlpha(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::StaticCurve(_) => "static-curve",
            Command::Ramp(_) => "ramp",
            Command::Evolve(_) => "evolve",
            Command::Sweep(_) => "sweep",
            Command::FitAlpha(_) => "fit-alpha",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::StaticCurve(a) | Command::Ramp(a) | Command::Evolve(a) | Command::Sweep(a) | Command::FitAlpha(a) => a,
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct CommonArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (overrides the `out` field of the configuration).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Recompute even when the manifest shows an identical finished run.
    #[arg(long)]
    pub force: bool,
}

/// Top-level configuration file. Each subcommand reads its own section.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub numerics: EvolveOptions,
    #[serde(default)]
    pub static_curve: Option<StaticCurveConfig>,
    #[serde(default)]
    pub ramp: Option<RampConfig>,
    #[serde(default)]
    pub evolve: Option<EvolveConfig>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub fit_alpha: Option<FitConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaticCurveConfig {
    pub g: Vec<f64>,
}

fn default_samples() -> usize {
    501
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RampConfig {
    pub kind: RampKind,
    #[serde(default)]
    pub g_i: f64,
    /// Required for every kind except `sta-tg`.
    #[serde(default)]
    pub g_f: Option<f64>,
    pub t_f: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Also write `E_AD(t)` of the instantaneous ground state.
    #[serde(default)]
    pub adiabatic_energy: bool,
    #[serde(default)]
    pub energy_offset: EnergyOffset,
    #[serde(default)]
    pub tg_convention: TgConvention,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub kind: RampKind,
    #[serde(default)]
    pub g_i: f64,
    #[serde(default)]
    pub g_f: Option<f64>,
    pub t_f: f64,
    /// Write the final and target density matrices with their spectra.
    #[serde(default = "yes")]
    pub dump_rspdm: bool,
    /// Repeat the run with twice the basis size and record both works.
    #[serde(default = "yes")]
    pub convergence_check: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub kinds: Vec<RampKind>,
    #[serde(default)]
    pub g_i: f64,
    pub g_f: Vec<f64>,
    pub t_f: Vec<f64>,
    #[serde(default)]
    pub convergence_check: bool,
}

fn default_window() -> [f64; 2] {
    DEFAULT_FIT_WINDOW
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    /// Results CSV; relative paths are taken from the configuration file's
    /// directory.
    pub results: PathBuf,
    #[serde(default = "default_window")]
    pub window: [f64; 2],
    /// Restrict to one ramp kind and final coupling; otherwise every
    /// `(kind, g_f)` group is fitted.
    #[serde(default)]
    pub kind: Option<RampKind>,
    #[serde(default)]
    pub g_f: Option<f64>,
}

fn finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be finite, got {x}")))
    }
}

fn duration(t_f: f64) -> Result<()> {
    if t_f.is_finite() && t_f > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("t_f must be positive and finite, got {t_f}")))
    }
}

fn final_coupling(kind: RampKind, g_f: Option<f64>) -> Result<f64> {
    match (kind, g_f) {
        (RampKind::StaTg, None) => Ok(f64::INFINITY),
        (RampKind::StaTg, Some(g)) => Err(Error::Config(format!("sta-tg ramps end at infinite coupling; remove g_f = {g}"))),
        (_, Some(g)) => finite("g_f", g).map(|_| g),
        (k, None) => Err(Error::Config(format!("{k} ramp needs g_f"))),
    }
}

impl StaticCurveConfig {
    pub fn validate(&self) -> Result<()> {
        if self.g.is_empty() {
            return Err(Error::Config("static_curve.g is empty".into()));
        }
        self.g.iter().try_for_each(|&g| finite("g", g))
    }
}

impl RampConfig {
    pub fn validate(&self) -> Result<()> {
        if !matches!(self.kind, RampKind::Sta | RampKind::StaTg | RampKind::Reference | RampKind::Linear) {
            return Err(Error::Config(format!("ramp kind must be sta, sta-tg, reference or linear, got {}", self.kind)));
        }
        finite("g_i", self.g_i)?;
        duration(self.t_f)?;
        final_coupling(self.kind, self.g_f)?;
        if self.samples < 2 {
            return Err(Error::Config("ramp.samples must be at least 2".into()));
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Ramp> {
        self.validate()?;
        let g_f = final_coupling(self.kind, self.g_f)?;
        match self.kind {
            RampKind::Reference => Ramp::reference(self.g_i, g_f, self.t_f),
            RampKind::Linear => Ramp::linear(self.g_i, g_f, self.t_f),
            RampKind::Sta => Ok(Ramp::from_sta(StaPulse::design(self.g_i, g_f, self.t_f)?)),
            _ => Ok(Ramp::from_sta(StaPulse::new(AnsatzKernels::tonks_girardeau(self.tg_convention), self.t_f)?)),
        }
    }
}

impl EvolveConfig {
    pub fn spec(&self) -> Result<RunSpec> {
        finite("g_i", self.g_i)?;
        duration(self.t_f)?;
        let spec = RunSpec::new(self.kind, self.g_i, final_coupling(self.kind, self.g_f)?, self.t_f);
        spec.validate()?;
        Ok(spec)
    }
}

impl SweepConfig {
    pub fn specs(&self) -> Result<Vec<RunSpec>> {
        if self.kinds.is_empty() || self.g_f.is_empty() || self.t_f.is_empty() {
            return Err(Error::Config("sweep needs non-empty kinds, g_f and t_f lists".into()));
        }
        finite("g_i", self.g_i)?;
        self.g_f.iter().try_for_each(|&g| finite("g_f", g))?;
        self.t_f.iter().try_for_each(|&t| duration(t))?;
        let specs = plan_sweep(&self.kinds, self.g_i, &self.g_f, &self.t_f);
        specs.iter().try_for_each(RunSpec::validate)?;
        Ok(specs)
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        let [lo, hi] = self.window;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Config(format!("fit window [{lo}, {hi}] is empty")));
        }
        if self.kind.is_some() != self.g_f.is_some() {
            return Err(Error::Config("fit_alpha.kind and fit_alpha.g_f go together".into()));
        }
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid configuration: {e}")))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!("unsupported schema_version {} (expected {SCHEMA_VERSION})", cfg.schema_version)));
        }
        cfg.numerics.propagator.validate()?;
        cfg.numerics.entanglement.grid().map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn section<'a, T>(&self, s: &'a Option<T>, name: &str) -> Result<&'a T> {
        s.as_ref().ok_or_else(|| Error::Config(format!("configuration has no `{name}` section")))
    }
}

/// Contents of `manifest.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub command: String,
    pub version: String,
    /// Echo of the configuration sections the command depends on.
    pub config: Value,
    /// `complete` or `partial`.
    pub status: String,
    pub outputs: Vec<String>,
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negative_g: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<RowFailure>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub convergence: Value,
}

impl Manifest {
    fn new(command: &str, config: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            version: CODE_VERSION.into(),
            config,
            status: "complete".into(),
            outputs: Vec::new(),
            warnings: Vec::new(),
            negative_g: None,
            failures: Vec::new(),
            convergence: Value::Null,
        }
    }

    pub fn read(dir: &Path) -> Option<Self> {
        let text = fs::read_to_string(dir.join(MANIFEST)).ok()?;
        serde_json::from_str(&text).ok()
    }

    fn write(&self, dir: &Path) -> Result<()> {
        let tmp = dir.join(".manifest.json.tmp");
        fs::write(&tmp, serde_json::to_string_pretty(self)? + "\n")?;
        fs::rename(tmp, dir.join(MANIFEST))?;
        Ok(())
    }

    /// Same command, configuration and code version.
    fn matches(&self, other: &Manifest) -> bool {
        self.command == other.command && self.config == other.config && self.version == other.version
    }
}

/// What a command invocation did.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Ran { dir: PathBuf, manifest: Manifest },
    Skipped { dir: PathBuf },
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<fs::File>> {
    Ok(BufWriter::new(fs::File::create(dir.join(name))?))
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let args = cli.command.args();
    let cfg = ExperimentConfig::load(&args.config)?;
    let name = cli.command.name();
    let dir = args.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out").join(name));
    let jobs = args.jobs.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)).max(1);
    let config_dir = args.config.parent().map(Path::to_path_buf).unwrap_or_default();

    let echo = match &cli.command {
        Command::StaticCurve(_) => json!({ "static_curve": cfg.section(&cfg.static_curve, "static_curve")? }),
        Command::Ramp(_) => json!({ "ramp": cfg.section(&cfg.ramp, "ramp")? }),
        Command::Evolve(_) => json!({ "evolve": cfg.section(&cfg.evolve, "evolve")?, "numerics": cfg.numerics }),
        Command::Sweep(_) => json!({ "sweep": cfg.section(&cfg.sweep, "sweep")?, "numerics": cfg.numerics }),
        Command::FitAlpha(_) => {
            let fc = cfg.section(&cfg.fit_alpha, "fit_alpha")?;
            let bytes = fs::read(config_dir.join(&fc.results))
                .map_err(|e| Error::Config(format!("cannot read results {}: {e}", fc.results.display())))?;
            let mut h = std::collections::hash_map::DefaultHasher::new();
            bytes.hash(&mut h);
            json!({ "fit_alpha": fc, "results_digest": format!("{:016x}", h.finish()) })
        }
    };
    let mut manifest = Manifest::new(name, echo);
    let previous = Manifest::read(&dir);
    if let Some(prev) = &previous {
        if !args.force && prev.status == "complete" && prev.matches(&manifest) {
            return Ok(Outcome::Skipped { dir });
        }
    }
    fs::create_dir_all(&dir)?;

    match &cli.command {
        Command::StaticCurve(_) => cmd_static_curve(cfg.section(&cfg.static_curve, "static_curve")?, &dir, &mut manifest)?,
        Command::Ramp(_) => cmd_ramp(cfg.section(&cfg.ramp, "ramp")?, &dir, &mut manifest)?,
        Command::Evolve(_) => cmd_evolve(cfg.section(&cfg.evolve, "evolve")?, &cfg.numerics, &dir, &mut manifest)?,
        Command::Sweep(_) => {
            let resume = previous.filter(|p| !args.force && p.matches(&manifest));
            cmd_sweep(cfg.section(&cfg.sweep, "sweep")?, &cfg.numerics, jobs, &dir, &mut manifest, resume)?
        }
        Command::FitAlpha(_) => cmd_fit_alpha(cfg.section(&cfg.fit_alpha, "fit_alpha")?, &config_dir, &dir, &mut manifest)?,
    }
    Ok(Outcome::Ran { dir, manifest })
}

pub fn cmd_static_curve(c: &StaticCurveConfig, dir: &Path, manifest: &mut Manifest) -> Result<()> {
    c.validate()?;
    let curve = ground_energy_curve(&c.g)?;
    curve.write_csv(create(dir, "ground_energy.csv")?)?;
    manifest.outputs.push("ground_energy.csv".into());
    manifest.write(dir)
}

/// Samples the pulse. For `sta-tg` the final row is `g = inf`, where the
/// closed-form pulse diverges.
pub fn ramp_table(c: &RampConfig) -> Result<Vec<(f64, f64)>> {
    let ramp = c.build()?;
    let n = c.samples;
    (0..n)
        .map(|k| {
            let t = if k + 1 == n { c.t_f } else { c.t_f * k as f64 / (n - 1) as f64 };
            match ramp.g(t) {
                Ok(g) => Ok((t, g)),
                Err(Error::SingularDenominator { .. }) if k + 1 == n && c.kind == RampKind::StaTg => Ok((t, f64::INFINITY)),
                Err(e) => Err(e),
            }
        })
        .collect()
}

pub fn cmd_ramp(c: &RampConfig, dir: &Path, manifest: &mut Manifest) -> Result<()> {
    let rows = ramp_table(c)?;
    let mut negative = rows.iter().any(|&(_, g)| g < 0.0);
    if c.kind == RampKind::Sta {
        if let Some(p) = c.build()?.sta_pulse() {
            negative |= p.has_negative_g(2001)?;
        }
    }
    write_ramp_csv(create(dir, "ramp.csv")?, &rows)?;
    manifest.outputs.push("ramp.csv".into());
    if c.adiabatic_energy {
        let shift = match c.energy_offset {
            EnergyOffset::Relative => 0.0,
            EnergyOffset::WithCenterOfMass => 0.5,
        };
        let mut out = csv::Writer::from_writer(create(dir, "adiabatic_energy.csv")?);
        out.write_record(["t", "E_AD"])?;
        for &(t, g) in &rows {
            out.write_record([t.to_string(), (even_energy(g, 0)? + shift).to_string()])?;
        }
        out.flush()?;
        manifest.outputs.push("adiabatic_energy.csv".into());
    }
    if negative {
        let min = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
        manifest.warnings.push(format!("pulse takes negative values (sampled minimum g = {min})"));
    }
    manifest.negative_g = Some(negative);
    manifest.write(dir)
}

pub fn cmd_evolve(c: &EvolveConfig, numerics: &EvolveOptions, dir: &Path, manifest: &mut Manifest) -> Result<()> {
    let spec = c.spec()?;
    let prop = Propagator::new(numerics.propagator)?;
    let ent = numerics.entanglement;
    let target = Target::prepare(spec.target_coupling(), &prop, &ent)?;
    let out = evolve_run(&spec, &prop, &ent, None, Some(&target))?;
    write_results_csv(create(dir, "result.csv")?, std::slice::from_ref(&out.result))?;
    manifest.outputs.push("result.csv".into());

    let mut traj = csv::Writer::from_writer(create(dir, "trajectory.csv")?);
    traj.write_record(["t", "norm", "energy"])?;
    for s in &out.snapshots {
        traj.write_record([s.t.to_string(), s.norm.to_string(), s.energy.to_string()])?;
    }
    traj.flush()?;
    let mut coef = csv::Writer::from_writer(create(dir, "coefficients.csv")?);
    coef.write_record(["n", "re", "im"])?;
    for (n, z) in out.final_state.c.iter().enumerate() {
        coef.write_record([n.to_string(), z.re.to_string(), z.im.to_string()])?;
    }
    coef.flush()?;
    manifest.outputs.extend(["trajectory.csv".into(), "coefficients.csv".into()]);

    if c.dump_rspdm {
        if let (Some(rho), Some(rho_t)) = (&out.rho, &target.rho) {
            rho.write_matrix_csv(create(dir, "rho.csv")?)?;
            rho.write_lambda_csv(create(dir, "lambda.csv")?)?;
            rho_t.write_matrix_csv(create(dir, "rho_target.csv")?)?;
            rho_t.write_lambda_csv(create(dir, "lambda_target.csv")?)?;
            manifest.outputs.extend(["rho.csv", "lambda.csv", "rho_target.csv", "lambda_target.csv"].map(String::from));
        }
    }
    if c.convergence_check {
        let doubled = Propagator::new(PropagatorConfig { n_max: 2 * prop.config.n_max, ..prop.config })?;
        let off = crate::analysis::EntanglementConfig { enabled: false, ..ent };
        let second = evolve_run(&spec, &doubled, &off, None, None)?.result;
        manifest.convergence = json!({
            "n_max": out.result.n_max,
            "W_irr": out.result.w_irr,
            "n_max_doubled": second.n_max,
            "W_irr_doubled": second.w_irr,
        });
    }
    manifest.negative_g = Some(out.result.negative_g);
    if out.result.negative_g {
        manifest.warnings.push("pulse takes negative values".into());
    }
    manifest.write(dir)
}

pub fn cmd_sweep(
    c: &SweepConfig,
    numerics: &EvolveOptions,
    jobs: usize,
    dir: &Path,
    manifest: &mut Manifest,
    resume: Option<Manifest>,
) -> Result<()> {
    let specs = c.specs()?;
    let path = dir.join("results.csv");
    let mut done: HashMap<usize, RunResult> = HashMap::new();
    if let Some(prev) = &resume {
        if let Ok(file) = fs::File::open(&path) {
            for row in read_results_csv(file)? {
                if let Some(i) = specs.iter().position(|s| *s == row.spec) {
                    done.insert(i, row);
                }
            }
        }
        manifest.warnings = prev.warnings.clone();
    }
    manifest.outputs = vec!["results.csv".into()];
    let todo: Vec<usize> = (0..specs.len()).filter(|i| !done.contains_key(i)).collect();
    let mut failures: Vec<RowFailure> = Vec::new();

    let flush = |done: &HashMap<usize, RunResult>, manifest: &Manifest| -> Result<()> {
        let rows: Vec<RunResult> = (0..specs.len()).filter_map(|i| done.get(&i).cloned()).collect();
        write_results_csv(create(dir, "results.csv")?, &rows)?;
        manifest.write(dir)
    };
    // results are written chunk by chunk so an interrupted sweep can resume
    for chunk in todo.chunks((4 * jobs).max(8)) {
        let batch: Vec<RunSpec> = chunk.iter().map(|&i| specs[i]).collect();
        let out = sweep(&batch, numerics, jobs)?;
        for w in out.warnings() {
            if !manifest.warnings.contains(&w) {
                manifest.warnings.push(w);
            }
        }
        for (r, &i) in out.results.into_iter().zip(chunk.iter().filter(|&&i| !out.failures.iter().any(|f| chunk[f.index] == i))) {
            done.insert(i, r);
        }
        failures.extend(out.failures.into_iter().map(|f| RowFailure { index: chunk[f.index], ..f }));
        manifest.status = "partial".into();
        manifest.failures = failures.clone();
        flush(&done, manifest)?;
    }

    if c.convergence_check {
        let doubled = EvolveOptions {
            propagator: PropagatorConfig { n_max: 2 * numerics.propagator.n_max, ..numerics.propagator },
            entanglement: crate::analysis::EntanglementConfig { enabled: false, ..numerics.entanglement },
        };
        let ok: Vec<usize> = (0..specs.len()).filter(|i| done.contains_key(i)).collect();
        let batch: Vec<RunSpec> = ok.iter().map(|&i| specs[i]).collect();
        let second = sweep(&batch, &doubled, jobs)?;
        let by_spec: HashMap<String, f64> =
            second.results.iter().map(|r| (format!("{:?}", r.spec), r.w_irr)).collect();
        manifest.convergence = Value::Array(
            ok.iter()
                .map(|i| {
                    let r = &done[i];
                    json!({
                        "kind": r.spec.kind, "g_f": r.spec.g_f, "t_f": r.spec.t_f,
                        "W_irr": r.w_irr, "W_irr_doubled": by_spec.get(&format!("{:?}", r.spec)),
                    })
                })
                .collect(),
        );
    }

    manifest.failures = failures;
    manifest.failures.sort_by_key(|f| f.index);
    manifest.status = if manifest.failures.is_empty() { "complete".into() } else { "partial".into() };
    flush(&done, manifest)?;
    match manifest.failures.first() {
        None => Ok(()),
        Some(f) => Err(Error::SweepFailures { failed: manifest.failures.len(), first: f.message.clone(), code: f.exit_code }),
    }
}

pub fn cmd_fit_alpha(c: &FitConfig, config_dir: &Path, dir: &Path, manifest: &mut Manifest) -> Result<()> {
    c.validate()?;
    let path = config_dir.join(&c.results);
    let rows = read_results_csv(fs::File::open(&path).map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?)?;
    let mut groups: Vec<(RampKind, f64)> = Vec::new();
    for r in &rows {
        let key = (r.spec.kind, r.spec.g_f);
        if !groups.contains(&key) {
            groups.push(key);
        }
    }
    let points = |kind: RampKind, g_f: f64| -> Vec<(f64, f64)> {
        rows.iter().filter(|r| r.spec.kind == kind && r.spec.g_f == g_f).map(|r| (r.spec.t_f, r.w_irr)).collect()
    };
    let notice = |fit: &crate::analysis::DecayFit, kind: RampKind, g_f: f64| -> Option<String> {
        (!fit.excluded.is_empty()).then(|| format!("{kind} g_f = {g_f}: excluded t_f {:?} with W_irr below the floor", fit.excluded))
    };
    let doc = match (c.kind, c.g_f) {
        (Some(kind), Some(g_f)) => {
            let fit = fit_decay_rate(&points(kind, g_f), c.window)?;
            manifest.warnings.extend(notice(&fit, kind, g_f));
            serde_json::to_value(&fit)?
        }
        _ => {
            let mut fits = Vec::new();
            for &(kind, g_f) in &groups {
                match fit_decay_rate(&points(kind, g_f), c.window) {
                    Ok(fit) => {
                        manifest.warnings.extend(notice(&fit, kind, g_f));
                        let mut v = serde_json::to_value(&fit)?;
                        v["kind"] = json!(kind);
                        v["g_f"] = json!(g_f);
                        fits.push(v);
                    }
                    Err(e) => manifest.warnings.push(format!("{kind} g_f = {g_f}: {e}")),
                }
            }
            if fits.is_empty() {
                return Err(Error::InsufficientPoints { needed: 4, found: 0 });
            }
            Value::Array(fits)
        }
    };
    fs::write(dir.join("fit.json"), serde_json::to_string_pretty(&doc)? + "\n")?;
    manifest.outputs.push("fit.json".into());
    manifest.write(dir)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(Outcome::Ran { dir, manifest }) => {
            for w in &manifest.warnings {
                eprintln!("warning: {w}");
            }
            eprintln!("{}: wrote {} to {}", cli.command.name(), manifest.outputs.join(", "), dir.display());
            0
        }
        Ok(Outcome::Skipped { dir }) => {
            eprintln!("{}: {} is up to date (use --force to recompute)", cli.command.name(), dir.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
