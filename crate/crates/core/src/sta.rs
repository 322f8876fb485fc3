//! Variational shortcut pulses.
//!
//! The relative wavefunction is approximated by
//! `N [(1 - eta) phi_i + eta phi_f] exp(i b x^2)`, where `phi_i`, `phi_f` are
//! the ground states at the initial and final coupling. Every moment of this
//! ansatz is a rational function of `eta` built from nine overlap kernels, so
//! the pulse and its time derivatives follow in closed form from Taylor jets.

use crate::error::{Error, Result};
use crate::numerics::jet::Jet;
use crate::numerics::quad::{integrate_pieces, QuadConfig};
use crate::ramps::SwitchingFunction;
use crate::static2b::{eigenstate, RelativeEigenstate};

const KERNEL_BREAKS: [f64; 7] = [0.0, 1.0, 2.5, 4.0, 6.0, 9.0, 15.0];

/// Sign convention for the infinite-coupling target state in the closed-form
/// branch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TgConvention {
    /// Target `(pi/4)^(-1/4) |x| exp(-x^2/2)`, positive overlap with the
    /// Gaussian; the same convention as the quadrature branch.
    #[default]
    PositiveOverlap,
    /// Cross terms with `1 + sqrt(2/pi)` as in the commonly quoted closed
    /// forms; equivalent to a sign-flipped target state.
    FlippedTarget,
}

/// Overlap, second-moment, kinetic and central-amplitude kernels between the
/// initial and final ground states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnsatzKernels {
    pub g_i: f64,
    pub g_f: f64,
    pub s: f64,
    pub m_ii: f64,
    pub m_if: f64,
    pub m_ff: f64,
    pub k_ii: f64,
    pub k_if: f64,
    pub k_ff: f64,
    pub p_i: f64,
    pub p_f: f64,
}

impl AnsatzKernels {
    pub fn compute(g_i: f64, g_f: f64) -> Result<Self> {
        if g_i == g_f {
            return Err(Error::DegenerateAnsatz(g_i));
        }
        Self::from_states(&eigenstate(g_i, 0)?, &eigenstate(g_f, 0)?)
    }

    /// Kernels by adaptive quadrature on `[0, 15]`, doubled by parity.
    pub fn from_states(a: &RelativeEigenstate, b: &RelativeEigenstate) -> Result<Self> {
        if a.g == b.g {
            return Err(Error::DegenerateAnsatz(a.g));
        }
        let cfg = QuadConfig::default();
        let int = |f: &dyn Fn(f64) -> f64| -> Result<f64> { Ok(2.0 * integrate_pieces(f, &KERNEL_BREAKS, cfg)?.value) };
        Ok(Self {
            g_i: a.g,
            g_f: b.g,
            s: int(&|x| a.value(x) * b.value(x))?,
            m_ii: int(&|x| x * x * a.density(x))?,
            m_if: int(&|x| x * x * a.value(x) * b.value(x))?,
            m_ff: int(&|x| x * x * b.density(x))?,
            k_ii: int(&|x| a.slope(x).powi(2))?,
            k_if: int(&|x| a.slope(x) * b.slope(x))?,
            k_ff: int(&|x| b.slope(x).powi(2))?,
            p_i: a.value_at_origin(),
            p_f: b.value_at_origin(),
        })
    }

    /// Closed-form kernels between the Gaussian and the infinite-coupling
    /// state.
    pub fn tonks_girardeau(convention: TgConvention) -> Self {
        let c = (2.0 / std::f64::consts::PI).sqrt();
        let sign = match convention {
            TgConvention::PositiveOverlap => 1.0,
            TgConvention::FlippedTarget => -1.0,
        };
        Self {
            g_i: 0.0,
            g_f: f64::INFINITY,
            s: sign * c,
            m_ii: 0.5,
            m_if: sign * c,
            m_ff: 1.5,
            k_ii: 0.5,
            k_if: 0.0,
            k_ff: 1.5,
            p_i: std::f64::consts::PI.powf(-0.25),
            p_f: 0.0,
        }
    }

    /// Kernels for the reversed protocol `g_f -> g_i`.
    pub fn swapped(&self) -> Self {
        Self {
            g_i: self.g_f,
            g_f: self.g_i,
            m_ii: self.m_ff,
            m_ff: self.m_ii,
            k_ii: self.k_ff,
            k_ff: self.k_ii,
            p_i: self.p_f,
            p_f: self.p_i,
            ..*self
        }
    }
}

/// Moments of the normalized ansatz at a given `eta`, with their partial
/// derivatives in `eta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnsatzState {
    pub eta: f64,
    pub n: f64,
    pub xi2: f64,
    pub beta: f64,
    pub rho0: f64,
    pub dxi2: f64,
    pub dbeta: f64,
    pub drho0: f64,
}

struct MomentJets<const N: usize> {
    xi2: Jet<N>,
    beta: Jet<N>,
    rho0: Jet<N>,
    dxi2: Jet<N>,
    dbeta: Jet<N>,
    drho0: Jet<N>,
    norm2: Jet<N>,
}

/// `Q = u^2 a + v^2 b + 2uv c` and `dQ/d eta` with `u = 1 - eta`, `v = eta`.
fn quadratic<const N: usize>(u: Jet<N>, v: Jet<N>, a: f64, b: f64, c: f64) -> (Jet<N>, Jet<N>) {
    let q = (u * u).scale(a) + (v * v).scale(b) + (u * v).scale(2.0 * c);
    let dq = u.scale(-2.0 * a) + v.scale(2.0 * b) + (u - v).scale(2.0 * c);
    (q, dq)
}

fn moments<const N: usize>(eta: Jet<N>, k: &AnsatzKernels) -> MomentJets<N> {
    let u = 1.0 - eta;
    let v = eta;
    let (d, dd) = quadratic(u, v, 1.0, 1.0, k.s);
    let ratio = |(q, dq): (Jet<N>, Jet<N>)| (q / d, (dq * d - q * dd) / (d * d));
    let (xi2, dxi2) = ratio(quadratic(u, v, k.m_ii, k.m_ff, k.m_if));
    let (beta, dbeta) = ratio(quadratic(u, v, k.k_ii, k.k_ff, k.k_if));
    let (rho0, drho0) = ratio(quadratic(u, v, k.p_i * k.p_i, k.p_f * k.p_f, k.p_i * k.p_f));
    MomentJets { xi2, beta, rho0, dxi2, dbeta, drho0, norm2: Jet::constant(1.0) / d }
}

/// Ansatz moments at `eta` in `[0, 1]`.
pub fn ansatz_moments(eta: f64, kernels: &AnsatzKernels) -> AnsatzState {
    let m = moments(Jet::<1>::constant(eta), kernels);
    AnsatzState {
        eta,
        n: m.norm2.value().sqrt(),
        xi2: m.xi2.value(),
        beta: m.beta.value(),
        rho0: m.rho0.value(),
        dxi2: m.dxi2.value(),
        dbeta: m.dbeta.value(),
        drho0: m.drho0.value(),
    }
}

/// One evaluated point of a shortcut pulse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StaPoint {
    pub t: f64,
    pub eta: f64,
    pub b: f64,
    pub b_dot: f64,
    pub g: f64,
    pub g_dot: f64,
    pub g_ddot: f64,
}

/// Shortcut pulse for a fixed pair of kernels and ramp duration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StaPulse {
    kernels: AnsatzKernels,
    sf: SwitchingFunction,
}

/// `[b, g]` jets from an `eta` jet; `g` is trustworthy to order `N - 3`.
fn pulse_jets<const N: usize>(eta: Jet<N>, k: &AnsatzKernels) -> Result<(Jet<N>, Jet<N>)> {
    let m = moments(eta, k);
    let drho = m.drho0.value();
    if drho == 0.0 || drho.abs() < 1e-10 * m.rho0.value().abs() {
        return Err(Error::SingularDenominator { eta: eta.value(), derivative: drho });
    }
    let b = m.xi2.deriv() / m.xi2.scale(4.0);
    let b_dot = b.deriv();
    let inner = b_dot + (b * b).scale(2.0) + 0.5;
    let g = -((m.dxi2 * inner + m.dbeta.scale(0.5)) / m.drho0);
    Ok((b, g))
}

impl StaPulse {
    pub fn new(kernels: AnsatzKernels, t_f: f64) -> Result<Self> {
        if kernels.g_i == kernels.g_f {
            return Err(Error::DegenerateAnsatz(kernels.g_i));
        }
        Ok(Self { kernels, sf: SwitchingFunction::new(t_f)? })
    }

    /// Pulse from `g_i` to `g_f` with kernels computed by quadrature.
    pub fn design(g_i: f64, g_f: f64, t_f: f64) -> Result<Self> {
        Self::new(AnsatzKernels::compute(g_i, g_f)?, t_f)
    }

    pub fn kernels(&self) -> &AnsatzKernels {
        &self.kernels
    }

    pub fn switching(&self) -> &SwitchingFunction {
        &self.sf
    }

    pub fn t_f(&self) -> f64 {
        self.sf.t_f()
    }

    pub fn point(&self, t: f64) -> Result<StaPoint> {
        let eta = self.sf.jet::<5>(t)?;
        let (b, g) = pulse_jets(eta, &self.kernels)?;
        Ok(StaPoint {
            t,
            eta: eta.value(),
            b: b.value(),
            b_dot: b.derivative(1),
            g: g.value(),
            g_dot: g.derivative(1),
            g_ddot: g.derivative(2),
        })
    }

    pub fn g(&self, t: f64) -> Result<f64> {
        Ok(pulse_jets(self.sf.jet::<3>(t)?, &self.kernels)?.1.value())
    }

    pub fn g_derivatives(&self, t: f64) -> Result<(f64, f64, f64)> {
        let p = self.point(t)?;
        Ok((p.g, p.g_dot, p.g_ddot))
    }

    /// Chirp `b` and its time derivative.
    pub fn chirp(&self, t: f64) -> Result<(f64, f64)> {
        let eta = self.sf.jet::<3>(t)?;
        let m = moments(eta, &self.kernels);
        let b = m.xi2.deriv() / m.xi2.scale(4.0);
        Ok((b.value(), b.derivative(1)))
    }

    /// `n` uniform samples `(t, g)` including both endpoints.
    pub fn sample(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        let n = n.max(2);
        let t_f = self.t_f();
        (0..n)
            .map(|k| {
                let t = if k + 1 == n { t_f } else { t_f * k as f64 / (n - 1) as f64 };
                self.g(t).map(|g| (t, g))
            })
            .collect()
    }

    /// Smallest sampled coupling; negative values lie outside the regime in
    /// which the ansatz is expected to be reliable.
    pub fn min_g(&self, n: usize) -> Result<f64> {
        Ok(self.sample(n)?.into_iter().map(|(_, g)| g).fold(f64::INFINITY, f64::min))
    }

    pub fn has_negative_g(&self, n: usize) -> Result<bool> {
        Ok(self.min_g(n)? < 0.0)
    }
}

/// Shortcut coupling at time `t`.
pub fn g_sta(t: f64, sf: &SwitchingFunction, kernels: &AnsatzKernels) -> Result<f64> {
    Ok(pulse_jets(sf.jet::<3>(t)?, kernels)?.1.value())
}

/// Shortcut coupling for the Gaussian-to-infinite-coupling ramp from closed
/// form kernels.
pub fn g_sta_tg(t: f64, sf: &SwitchingFunction, convention: TgConvention) -> Result<f64> {
    g_sta(t, sf, &AnsatzKernels::tonks_girardeau(convention))
}

/// Chirp `(b, b_dot)` at time `t`.
pub fn chirp(t: f64, sf: &SwitchingFunction, kernels: &AnsatzKernels) -> Result<(f64, f64)> {
    StaPulse { kernels: *kernels, sf: *sf }.chirp(t)
}

/// Sampled chirp along a pulse.
#[derive(Clone, Debug, PartialEq)]
pub struct ChirpTrajectory {
    pub times: Vec<f64>,
    pub b: Vec<f64>,
    pub b_dot: Vec<f64>,
}

pub fn chirp_trajectory(sf: &SwitchingFunction, kernels: &AnsatzKernels, n: usize) -> Result<ChirpTrajectory> {
    let n = n.max(2);
    let mut out = ChirpTrajectory { times: Vec::with_capacity(n), b: Vec::with_capacity(n), b_dot: Vec::with_capacity(n) };
    for k in 0..n {
        let t = if k + 1 == n { sf.t_f() } else { sf.t_f() * k as f64 / (n - 1) as f64 };
        let (b, bd) = chirp(t, sf, kernels)?;
        out.times.push(t);
        out.b.push(b);
        out.b_dot.push(bd);
    }
    Ok(out)
}
