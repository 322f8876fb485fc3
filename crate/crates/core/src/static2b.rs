//! Stationary states of the relative Hamiltonian
//! `H = -1/2 d^2/dx^2 + 1/2 x^2 + g delta(x)`.
//!
//! Even eigenstates are `phi(x) = N exp(-x^2/2) U(1/4 - E/2, 1/2, x^2)`; their
//! energies solve `2 Gamma(3/4 - E/2) / Gamma(1/4 - E/2) + g = 0`. Odd states
//! vanish at the origin and are untouched by the contact term.

use std::io::Write;

use crate::error::{Error, Result};
use crate::numerics::quad::{integrate_pieces, QuadConfig};
use crate::ramps::Ramp;
use crate::specfun::{gamma_ratio, kummer_u, oscillator_eigenfunction};

const SCAN_POINTS: usize = 64;
const NORM_BREAKS: [f64; 7] = [0.0, 1.0, 2.5, 4.0, 6.0, 9.0, 15.0];

/// `2 Gamma(3/4 - E/2) / Gamma(1/4 - E/2)`, i.e. `-g(E)`.
fn energy_function(e: f64) -> Result<f64> {
    Ok(2.0 * gamma_ratio(0.75 - 0.5 * e, 0.25 - 0.5 * e)?)
}

/// Residual of the even-state energy equation at `(g, E)`.
pub fn energy_residual(g: f64, e: f64) -> Result<f64> {
    Ok(energy_function(e)? + g)
}

/// Coupling for which `E` is an even eigenvalue.
pub fn coupling_for_energy(e: f64) -> Result<f64> {
    Ok(-energy_function(e)?)
}

/// `sum_n u_2n(0)^2 / (E_n - E)` over the even oscillator spectrum, equal to
/// `-1/g(E)`.
pub fn origin_resolvent(e: f64) -> Result<f64> {
    Ok(0.5 * gamma_ratio(0.25 - 0.5 * e, 0.75 - 0.5 * e)?)
}

fn bisect(g: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    // residual is positive at lo and non-positive at hi
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if energy_residual(g, mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (rl, rh) = (energy_residual(g, lo)?.abs(), energy_residual(g, hi)?.abs());
    Ok(if rl <= rh { lo } else { hi })
}

/// Energy of the even eigenstate on the given branch (0 = ground state).
///
/// For `g > 0` the root lies in `(2n + 1/2, 2n + 3/2)`; `g = 0` and
/// `g = +inf` return the interval ends exactly. Negative `g` only has the
/// ground branch, located below `1/2` by geometric downward search.
pub fn even_energy(g: f64, branch: usize) -> Result<f64> {
    if g.is_nan() || g == f64::NEG_INFINITY {
        return Err(Error::InvalidArgument(format!("coupling must be a number or +inf, got {g}")));
    }
    let base = 2.0 * branch as f64;
    if g == 0.0 {
        return Ok(base + 0.5);
    }
    if g == f64::INFINITY {
        return Ok(base + 1.5);
    }
    if g < 0.0 {
        if branch > 0 {
            return Err(Error::AttractiveBranch { g, branch });
        }
        let hi = 0.5;
        let mut step = 1.0;
        let mut lo = hi - step;
        while energy_residual(g, lo)? <= 0.0 {
            step *= 2.0;
            lo = hi - step;
            if step > 1e8 {
                return Err(Error::Bracket { g, branch, lo, hi });
            }
        }
        return bisect(g, lo, hi);
    }
    let (lo, hi) = (base + 0.5, base + 1.5);
    let width = hi - lo;
    let mut prev = lo;
    for k in 1..=SCAN_POINTS {
        // the last point sits just inside the Gamma pole at hi
        let e = if k == SCAN_POINTS { hi - 4.0 * f64::EPSILON * hi } else { lo + width * k as f64 / SCAN_POINTS as f64 };
        if energy_residual(g, e)? <= 0.0 {
            return bisect(g, prev, e);
        }
        prev = e;
    }
    Err(Error::Bracket { g, branch, lo, hi })
}

/// Energy of the odd eigenstate on the given branch, `2n + 3/2`.
pub fn odd_energy(branch: usize) -> f64 {
    2.0 * branch as f64 + 1.5
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Form {
    Even { a: f64 },
    Odd { n: usize },
}

/// Normalized eigenstate of the relative Hamiltonian.
///
/// Even states are signed so that the lobe adjacent to the origin is
/// positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelativeEigenstate {
    pub g: f64,
    pub energy: f64,
    pub branch: usize,
    norm: f64,
    form: Form,
}

impl RelativeEigenstate {
    /// Even eigenstate with a known energy; the normalization is computed
    /// by quadrature.
    pub fn from_energy(g: f64, energy: f64, branch: usize) -> Result<Self> {
        let a = 0.25 - 0.5 * energy;
        let mut st = Self { g, energy, branch, norm: 1.0, form: Form::Even { a } };
        let mass = 2.0 * integrate_pieces(|x| st.value(x).powi(2), &NORM_BREAKS, QuadConfig::default())?.value;
        // sign of the lobe next to the origin
        let probe = st.value(1e-3 / (1.0 + energy.abs()).sqrt());
        let sign = if probe < 0.0 { -1.0 } else { 1.0 };
        st.norm = sign / mass.sqrt();
        Ok(st)
    }

    /// Infinite-coupling ground state `(pi/4)^(-1/4) |x| exp(-x^2/2)`.
    pub fn tonks_girardeau() -> Self {
        let norm = (std::f64::consts::PI / 4.0).powf(-0.25);
        Self { g: f64::INFINITY, energy: 1.5, branch: 0, norm, form: Form::Even { a: -0.5 } }
    }

    /// Odd oscillator eigenstate `u_(2n+1)`.
    pub fn odd(branch: usize) -> Self {
        Self { g: f64::NAN, energy: odd_energy(branch), branch, norm: 1.0, form: Form::Odd { n: 2 * branch + 1 } }
    }

    pub fn is_even(&self) -> bool {
        matches!(self.form, Form::Even { .. })
    }

    pub fn norm_constant(&self) -> f64 {
        self.norm
    }

    pub fn value(&self, x: f64) -> f64 {
        match self.form {
            Form::Even { a } => self.norm * (-0.5 * x * x).exp() * kummer_u(a, x * x),
            Form::Odd { n } => oscillator_eigenfunction(n, x),
        }
    }

    /// `phi'(x)`; at `x = 0` the right-hand limit is returned for even states.
    pub fn slope(&self, x: f64) -> f64 {
        match self.form {
            Form::Even { a } => {
                let y = x.abs();
                let z = y * y;
                let right = self.norm * (-0.5 * z).exp() * (-y * kummer_u(a, z) - 2.0 * a * kummer_u(a + 0.5, z));
                if x < 0.0 {
                    -right
                } else {
                    right
                }
            }
            Form::Odd { n } => {
                // u_n' = sqrt(n/2) u_(n-1) - sqrt((n+1)/2) u_(n+1)
                let nf = n as f64;
                (0.5 * nf).sqrt() * oscillator_eigenfunction(n - 1, x)
                    - (0.5 * (nf + 1.0)).sqrt() * oscillator_eigenfunction(n + 1, x)
            }
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        self.value(x).powi(2)
    }

    /// `phi(0)`, exact from `U(a, 1/2, 0) = sqrt(pi) / Gamma(a + 1/2)`.
    pub fn value_at_origin(&self) -> f64 {
        self.value(0.0)
    }
}

/// Even eigenstate at coupling `g` on the given branch.
pub fn eigenstate(g: f64, branch: usize) -> Result<RelativeEigenstate> {
    if g == f64::INFINITY && branch == 0 {
        return Ok(RelativeEigenstate::tonks_girardeau());
    }
    let e = even_energy(g, branch)?;
    RelativeEigenstate::from_energy(g, e, branch)
}

/// Ground-state energies sampled on a grid of couplings, sorted by `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyCurve {
    pub samples: Vec<(f64, f64)>,
}

impl EnergyCurve {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["g", "E0"])?;
        for (g, e) in &self.samples {
            out.write_record([g.to_string(), e.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn ground_energy_curve(g_samples: &[f64]) -> Result<EnergyCurve> {
    if let Some(bad) = g_samples.iter().find(|g| !g.is_finite()) {
        return Err(Error::InvalidArgument(format!("energy curve samples must be finite, got {bad}")));
    }
    let mut gs = g_samples.to_vec();
    gs.sort_by(f64::total_cmp);
    gs.dedup();
    let samples = gs.into_iter().map(|g| even_energy(g, 0).map(|e| (g, e))).collect::<Result<_>>()?;
    Ok(EnergyCurve { samples })
}

/// Whether adiabatic energies include the center-of-mass zero-point energy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyOffset {
    #[default]
    Relative,
    WithCenterOfMass,
}

/// Ground energy at the instantaneous coupling of a ramp.
pub fn adiabatic_energy(ramp: &Ramp, t: f64, offset: EnergyOffset) -> Result<f64> {
    let e = even_energy(ramp.g(t)?, 0)?;
    Ok(match offset {
        EnergyOffset::Relative => e,
        EnergyOffset::WithCenterOfMass => e + 0.5,
    })
}
