//! Time-dependent relative wavefunction in the even oscillator basis.
//!
//! In the basis `u_0, u_2, u_4, ...` the contact term is rank one:
//! `H = diag(E_n) + g v v^T` with `v_n = u_2n(0)`. A step of the implicit
//! midpoint rule therefore costs `O(n_max)` via Sherman-Morrison.
//!
//! Truncating the basis biases the contact term because the cusp of the exact
//! eigenstates is poorly resolved. The default [`CouplingScheme::Renormalized`]
//! replaces `g` by the coupling for which the truncated model has the exact
//! ground energy at `g`; [`CouplingScheme::Bare`] uses `g` unchanged.

pub mod grid;

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::richardson;
use crate::ramps::Ramp;
use crate::specfun::{even_center_values, oscillator_values};
use crate::static2b::even_energy;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Even oscillator modes `u_0, u_2, ..., u_(2 n_max - 2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralBasis {
    energies: Vec<f64>,
    center: Vec<f64>,
}

impl SpectralBasis {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidArgument("spectral basis needs at least one mode".into()));
        }
        let energies = (0..n_max).map(|n| 2.0 * n as f64 + 0.5).collect();
        Ok(Self { energies, center: even_center_values(n_max) })
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `v_n = u_2n(0)`.
    pub fn center_values(&self) -> &[f64] {
        &self.center
    }

    /// Truncated resolvent `sum_n v_n^2 / (E_n - E)`.
    pub fn resolvent(&self, e: f64) -> f64 {
        self.energies.iter().zip(&self.center).map(|(en, v)| v * v / (en - e)).sum()
    }

    /// Coupling used in the truncated Hamiltonian to represent `g`.
    pub fn effective_coupling(&self, g: f64, scheme: CouplingScheme) -> Result<f64> {
        match scheme {
            CouplingScheme::Bare => Ok(g),
            CouplingScheme::Renormalized => {
                if g == 0.0 {
                    return Ok(0.0);
                }
                // the truncated model's lowest root of 1 + g_N S_N(E) = 0 sits at E_0(g)
                Ok(-1.0 / self.resolvent(even_energy(g, 0)?))
            }
        }
    }
}

/// Treatment of the contact coupling in the truncated basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingScheme {
    Bare,
    #[default]
    Renormalized,
}

/// `H_mn = E_n delta_mn + g v_m v_n`.
pub fn hamiltonian_matrix(g: f64, basis: &SpectralBasis) -> DMatrix<f64> {
    let n = basis.len();
    let v = basis.center_values();
    DMatrix::from_fn(n, n, |i, j| g * (v[i] * v[j]) + if i == j { basis.energies[i] } else { 0.0 })
}

/// Eigenvalues of the rank-one-perturbed diagonal Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct StaticSpectrum {
    pub coupling: f64,
    pub values: Vec<f64>,
    energies: Vec<f64>,
    center: Vec<f64>,
}

impl StaticSpectrum {
    /// Normalized eigenvector `c_n ∝ v_n / (E_n - lambda_k)`, signed so that
    /// the amplitude at the origin is positive.
    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        let lam = self.values[k];
        if self.coupling == 0.0 {
            let mut c = vec![0.0; self.energies.len()];
            c[k] = self.center[k].signum();
            return c;
        }
        let mut c: Vec<f64> = self.energies.iter().zip(&self.center).map(|(e, v)| v / (e - lam)).collect();
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        let sign = if c.iter().zip(&self.center).map(|(a, b)| a * b).sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
        c.iter_mut().for_each(|x| *x *= sign / norm);
        c
    }

    pub fn ground_state(&self) -> WaveState {
        WaveState::from_real(0.0, &self.eigenvector(0))
    }
}

/// Full spectrum of `diag(E) + gamma v v^T` from the secular equation
/// `1 + gamma sum v_n^2 / (E_n - lambda) = 0`, one bisection per interlacing
/// interval.
pub fn secular_spectrum(gamma: f64, basis: &SpectralBasis) -> StaticSpectrum {
    let e = basis.energies();
    let v = basis.center_values();
    let n = e.len();
    let mut values = Vec::with_capacity(n);
    if gamma == 0.0 {
        values.extend_from_slice(e);
    } else {
        let f = |lam: f64| 1.0 + gamma * basis.resolvent(lam);
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        for k in 0..n {
            // positive coupling pushes each level up inside (E_k, E_k+1); negative down
            let (mut lo, mut hi) = if gamma > 0.0 {
                (e[k], if k + 1 < n { e[k + 1] } else { e[k] + gamma * norm2 })
            } else {
                (if k == 0 { e[0] + gamma * norm2 } else { e[k - 1] }, e[k])
            };
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                // f is monotone between consecutive poles, increasing for gamma > 0
                if (f(mid) < 0.0) == (gamma > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            values.push(0.5 * (lo + hi));
        }
    }
    StaticSpectrum { coupling: gamma, values, energies: e.to_vec(), center: v.to_vec() }
}

/// Spectrum of the truncated Hamiltonian at coupling `g`.
pub fn static_diagonalize(g: f64, basis: &SpectralBasis, scheme: CouplingScheme) -> Result<StaticSpectrum> {
    Ok(secular_spectrum(basis.effective_coupling(g, scheme)?, basis))
}

/// Lowest bare-coupling eigenvalue extrapolated to an infinite basis,
/// assuming an error expansion in powers of `n_max^(-1/2)`.
pub fn extrapolated_ground_energy(g: f64, sizes: &[usize]) -> Result<f64> {
    if sizes.len() < 2 {
        return Err(Error::InvalidArgument("extrapolation needs at least two basis sizes".into()));
    }
    let mut hs = Vec::with_capacity(sizes.len());
    let mut vals = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let basis = SpectralBasis::new(n)?;
        hs.push(1.0 / (n as f64).sqrt());
        vals.push(secular_spectrum(g, &basis).values[0]);
    }
    Ok(richardson(&hs, &vals))
}

/// Coefficients of the relative wavefunction in the even oscillator basis.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveState {
    pub t: f64,
    pub c: Vec<Complex64>,
}

impl WaveState {
    pub fn from_real(t: f64, c: &[f64]) -> Self {
        Self { t, c: c.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn overlap(&self, other: &WaveState) -> Complex64 {
        self.c.iter().zip(&other.c).map(|(a, b)| a.conj() * b).sum()
    }

    /// `phi(x) = sum_n c_n u_2n(x)` at each grid point.
    pub fn to_position(&self, xs: &[f64]) -> Vec<Complex64> {
        let n = self.c.len();
        xs.iter()
            .map(|&x| {
                let u = oscillator_values(2 * n - 2, x);
                self.c.iter().enumerate().map(|(k, c)| c * u[2 * k]).sum()
            })
            .collect()
    }
}

/// `<c| H |c>` with the contact coupling represented per `scheme`.
pub fn energy(state: &WaveState, g: f64, basis: &SpectralBasis, scheme: CouplingScheme) -> Result<f64> {
    let gamma = basis.effective_coupling(g, scheme)?;
    Ok(energy_with_coupling(state, gamma, basis))
}

fn energy_with_coupling(state: &WaveState, gamma: f64, basis: &SpectralBasis) -> f64 {
    let diag: f64 = state.c.iter().zip(basis.energies()).map(|(c, e)| e * c.norm_sqr()).sum();
    let proj: Complex64 = state.c.iter().zip(basis.center_values()).map(|(c, v)| c * v).sum();
    diag + gamma * proj.norm_sqr()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeScheme {
    /// Crank-Nicolson form with the coupling at mid-step; exactly unitary.
    #[default]
    ImplicitMidpoint,
    /// Classical fourth-order Runge-Kutta.
    Rk4,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PropagatorConfig {
    pub n_max: usize,
    pub dt: f64,
    pub scheme: TimeScheme,
    pub coupling: CouplingScheme,
    /// Allowed norm drift per unit time.
    pub norm_budget: f64,
    /// Record a snapshot every this many steps (0 = only the end points).
    pub snapshot_every: usize,
}

impl Default for PropagatorConfig {
    fn default() -> Self {
        Self {
            n_max: 256,
            dt: 1e-3,
            scheme: TimeScheme::ImplicitMidpoint,
            coupling: CouplingScheme::Renormalized,
            norm_budget: 1e-8,
            snapshot_every: 0,
        }
    }
}

impl PropagatorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.n_max < 32 {
            return Err(Error::Config(format!("n_max must be at least 32, got {}", self.n_max)));
        }
        if !(self.norm_budget > 0.0) {
            return Err(Error::Config("norm budget must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub norm: f64,
    pub energy: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub initial: WaveState,
    pub final_state: WaveState,
    pub snapshots: Vec<Snapshot>,
    pub steps: usize,
}

impl Trajectory {
    pub fn write_snapshots_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "norm", "energy"])?;
        for s in &self.snapshots {
            out.write_record([s.t.to_string(), s.norm.to_string(), s.energy.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Coefficient table with columns `n,re,im` for the final state.
    pub fn write_coefficients_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["n", "re", "im"])?;
        for (n, c) in self.final_state.c.iter().enumerate() {
            out.write_record([n.to_string(), c.re.to_string(), c.im.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Spectral propagator bound to a basis and coupling scheme.
#[derive(Clone, Debug)]
pub struct Propagator {
    pub basis: SpectralBasis,
    pub config: PropagatorConfig,
}

impl Propagator {
    pub fn new(config: PropagatorConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { basis: SpectralBasis::new(config.n_max)?, config })
    }

    pub fn coupling(&self, g: f64) -> Result<f64> {
        self.basis.effective_coupling(g, self.config.coupling)
    }

    pub fn ground_state(&self, g: f64) -> Result<WaveState> {
        Ok(static_diagonalize(g, &self.basis, self.config.coupling)?.ground_state())
    }

    pub fn energy(&self, state: &WaveState, g: f64) -> Result<f64> {
        energy(state, g, &self.basis, self.config.coupling)
    }

    fn apply_h(&self, gamma: f64, c: &[Complex64], out: &mut [Complex64]) {
        let v = self.basis.center_values();
        let proj: Complex64 = c.iter().zip(v).map(|(a, b)| a * b).sum();
        for ((o, (ci, e)), vi) in out.iter_mut().zip(c.iter().zip(self.basis.energies())).zip(v) {
            *o = ci * e + proj * (gamma * vi);
        }
    }

    fn midpoint_step(&self, gamma: f64, tau: f64, c: &mut [Complex64], scratch: &mut [Complex64], w: &mut [Complex64]) {
        let v = self.basis.center_values();
        let e = self.basis.energies();
        let proj: Complex64 = c.iter().zip(v).map(|(a, b)| a * b).sum();
        let k = I * (tau * gamma);
        // right-hand side, then divide by the diagonal part of (1 + i tau H)
        let mut vz = Complex64::new(0.0, 0.0);
        let mut vw = Complex64::new(0.0, 0.0);
        for n in 0..c.len() {
            let a = Complex64::new(1.0, tau * e[n]);
            let y = a.conj() * c[n] - k * proj * v[n];
            let z = y / a;
            let wn = v[n] / a;
            scratch[n] = z;
            w[n] = wn;
            vz += z * v[n];
            vw += wn * v[n];
        }
        let factor = k * vz / (1.0 + k * vw);
        for n in 0..c.len() {
            c[n] = scratch[n] - w[n] * factor;
        }
    }

    fn rk4_step(&self, g0: f64, gm: f64, g1: f64, dt: f64, c: &mut [Complex64]) {
        let n = c.len();
        let mut k = [vec![Complex64::new(0.0, 0.0); n], vec![Complex64::new(0.0, 0.0); n], vec![Complex64::new(0.0, 0.0); n], vec![Complex64::new(0.0, 0.0); n]];
        let mut tmp = vec![Complex64::new(0.0, 0.0); n];
        let gammas = [g0, gm, gm, g1];
        let weights = [0.0, 0.5, 0.5, 1.0];
        for s in 0..4 {
            if s == 0 {
                tmp.copy_from_slice(c);
            } else {
                for i in 0..n {
                    tmp[i] = c[i] + k[s - 1][i] * (weights[s] * dt);
                }
            }
            let mut h = vec![Complex64::new(0.0, 0.0); n];
            self.apply_h(gammas[s], &tmp, &mut h);
            for i in 0..n {
                k[s][i] = -I * h[i];
            }
        }
        for i in 0..n {
            c[i] += (k[0][i] + k[1][i] * 2.0 + k[2][i] * 2.0 + k[3][i]) * (dt / 6.0);
        }
    }

    /// Evolves `initial` under `ramp` from `t = 0` to `t_f`.
    pub fn evolve(&self, ramp: &Ramp, initial: WaveState) -> Result<Trajectory> {
        let t_f = ramp.t_f();
        let steps = (t_f / self.config.dt).ceil().max(1.0) as usize;
        let dt = t_f / steps as f64;
        let n = self.basis.len();
        if initial.c.len() != n {
            return Err(Error::Propagation(format!("state has {} coefficients, basis has {n}", initial.c.len())));
        }
        let mut c = initial.c.clone();
        let mut scratch = vec![Complex64::new(0.0, 0.0); n];
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        let mut snapshots = Vec::new();
        let snap = |t: f64, c: &[Complex64], gamma: f64, out: &mut Vec<Snapshot>| {
            let st = WaveState { t, c: c.to_vec() };
            out.push(Snapshot { t, norm: st.norm_sqr(), energy: energy_with_coupling(&st, gamma, &self.basis) });
        };
        let mut gamma_prev = self.coupling(ramp.g(0.0)?)?;
        snap(0.0, &c, gamma_prev, &mut snapshots);
        let norm0 = initial.norm_sqr();
        for step in 0..steps {
            let t0 = dt * step as f64;
            let t1 = if step + 1 == steps { t_f } else { t0 + dt };
            let gm = self.coupling(ramp.g(0.5 * (t0 + t1))?)?;
            let g1 = self.coupling(ramp.g(t1)?)?;
            match self.config.scheme {
                TimeScheme::ImplicitMidpoint => self.midpoint_step(gm, 0.5 * dt, &mut c, &mut scratch, &mut w),
                TimeScheme::Rk4 => self.rk4_step(gamma_prev, gm, g1, dt, &mut c),
            }
            gamma_prev = g1;
            if !c.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::Propagation(format!("non-finite amplitude at t = {t1}")));
            }
            let every = self.config.snapshot_every;
            if (every > 0 && (step + 1) % every == 0) || step + 1 == steps {
                snap(t1, &c, g1, &mut snapshots);
                let drift = (snapshots.last().unwrap().norm - norm0).abs();
                let budget = self.config.norm_budget * t1.max(1.0);
                if drift > budget {
                    return Err(Error::NormBudget { drift, budget, t: t1 });
                }
            }
        }
        Ok(Trajectory { initial, final_state: WaveState { t: t_f, c }, snapshots, steps })
    }
}

/// Starts from the model ground state at `g(0)` and evolves along `ramp`.
pub fn propagate(ramp: &Ramp, config: &PropagatorConfig) -> Result<Trajectory> {
    let prop = Propagator::new(*config)?;
    let start = prop.ground_state(ramp.g(0.0)?)?;
    prop.evolve(ramp, start)
}
