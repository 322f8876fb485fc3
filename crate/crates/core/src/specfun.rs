//! Special functions: Gamma, the Tricomi confluent hypergeometric function
//! `U(a, 1/2, z)`, and normalized harmonic-oscillator eigenfunctions.
//!
//! Lengths are in units of the oscillator length `a = sqrt(hbar / m omega)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const SQRT_PI: f64 = 1.772_453_850_905_516;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        0.0
    } else if r <= 0.5 {
        (PI * r).sin()
    } else if r <= 1.5 {
        (PI * (1.0 - r)).sin()
    } else {
        (PI * (r - 2.0)).sin()
    }
}

fn lanczos_sum(t: f64) -> f64 {
    LANCZOS[1..].iter().enumerate().fold(LANCZOS[0], |acc, (i, c)| acc + c / (t + (i + 1) as f64))
}

/// Gamma function. Errors at the poles `0, -1, -2, ...`.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Ok(f64::NAN);
    }
    if is_pole(x) {
        return Err(Error::GammaPole(x));
    }
    if x < 0.5 {
        return Ok(PI / (sin_pi(x) * gamma(1.0 - x)?));
    }
    if x == x.round() && x <= 23.0 {
        // exact factorials while they are representable
        return Ok((1..x as u64).fold(1.0, |acc, k| acc * k as f64));
    }
    if x > 171.7 {
        return Ok(f64::INFINITY);
    }
    let t = x - 1.0;
    let w = t + LANCZOS_G + 0.5;
    // split the power so that w^(t+1/2) does not overflow before e^-w applies
    let half = w.powf(0.5 * (t + 0.5));
    Ok((2.0 * PI).sqrt() * half * (half * (-w).exp()) * lanczos_sum(t))
}

/// `(ln|Gamma(x)|, sign Gamma(x))`; `(inf, 1)` at the poles.
pub fn ln_gamma(x: f64) -> (f64, f64) {
    if is_pole(x) {
        return (f64::INFINITY, 1.0);
    }
    if x < 0.5 {
        let s = sin_pi(x);
        let (lg, _) = ln_gamma(1.0 - x);
        return (PI.ln() - s.abs().ln() - lg, s.signum());
    }
    let t = x - 1.0;
    let w = t + LANCZOS_G + 0.5;
    (LN_SQRT_2PI + (t + 0.5) * w.ln() - w + lanczos_sum(t).ln(), 1.0)
}

/// `1 / Gamma(x)`, zero at the poles.
pub fn recip_gamma(x: f64) -> f64 {
    if is_pole(x) {
        return 0.0;
    }
    match gamma(x) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// `Gamma(p) / Gamma(q)`, evaluated through log-Gamma for large arguments.
/// A pole in the denominator alone gives 0.
pub fn gamma_ratio(p: f64, q: f64) -> Result<f64> {
    match (is_pole(p), is_pole(q)) {
        (true, true) => return Err(Error::RatioPoles { p, q }),
        (true, false) => return Err(Error::GammaPole(p)),
        (false, true) => return Ok(0.0),
        _ => {}
    }
    if p.abs() <= 30.0 && q.abs() <= 30.0 {
        return Ok(gamma(p)? / gamma(q)?);
    }
    let (lp, sp) = ln_gamma(p);
    let (lq, sq) = ln_gamma(q);
    Ok(sp * sq * (lp - lq).exp())
}

/// Pochhammer-style term ratio helper for the terminating cases.
fn polynomial_u(n: usize, a: f64, z: f64) -> f64 {
    // z^n * sum_k (a)_k (a+1/2)_k / k! (-1/z)^k, evaluated by Horner in z
    let mut coef = 1.0;
    let mut acc = 0.0;
    for k in 0..=n {
        if k > 0 {
            let kf = (k - 1) as f64;
            coef *= -(a + kf) * (a + 0.5 + kf) / k as f64;
        }
        acc = acc * z + coef;
    }
    acc
}

fn terminating(a: f64, z: f64) -> Option<f64> {
    if is_pole(a) {
        return Some(polynomial_u((-a) as usize, a, z));
    }
    if is_pole(a + 0.5) {
        return Some(z.sqrt() * polynomial_u((-(a + 0.5)) as usize, a, z));
    }
    None
}

fn kummer_m(a: f64, b: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        term *= (a + k) * z / ((b + k) * (k + 1.0));
        sum += term;
        k += 1.0;
        if term.abs() <= 1e-17 * sum.abs() && k > -a {
            break;
        }
        if k > 2000.0 {
            break;
        }
    }
    sum
}

fn series_limit(a: f64) -> f64 {
    4.0 / (1.0 + 0.5 * a.abs())
}

fn asymptotic_start(a: f64) -> f64 {
    let s = a.abs() + 1.0;
    if a > 0.0 {
        (6.0 * s * s).max(35.0)
    } else {
        (1.5 * s * s).max(35.0)
    }
}

/// Connection formula through two Kummer M series (b = 1/2).
fn connection_series(a: f64, z: f64) -> f64 {
    let first = recip_gamma(a + 0.5) * kummer_m(a, 0.5, z);
    let second = 2.0 * z.sqrt() * recip_gamma(a) * kummer_m(a + 0.5, 1.5, z);
    SQRT_PI * (first - second)
}

/// Asymptotic series `z^a U ~ sum_k (a)_k (a+1/2)_k / k! (-z)^-k` and its
/// derivative; both returned without the `z^-a` factor.
fn asymptotic_scaled(a: f64, z: f64) -> (f64, f64) {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut dsum = -a / z;
    let mut prev = f64::INFINITY;
    for k in 0..400 {
        let kf = k as f64;
        term *= -(a + kf) * (a + 0.5 + kf) / ((kf + 1.0) * z);
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        sum += term;
        dsum += term * (-a - kf - 1.0) / z;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    (sum, dsum)
}

/// Integrates `z U'' + (1/2 - z) U' - a U = 0` from `z_start` down to `z_end`
/// with local Taylor expansions; the recessive solution is stable in this
/// direction.
fn inward(a: f64, z_start: f64, z_end: f64) -> f64 {
    const B: f64 = 0.5;
    let (mut u, mut du) = asymptotic_scaled(a, z_start);
    let mut log_scale = -a * z_start.ln();
    let mut z0 = z_start;
    while z0 > z_end {
        let h = (z0 - z_end).min(2.0).min(z0 / (2.0 * a.abs() + 4.0));
        let mut c_prev = u;
        let mut c_cur = du;
        let mut u_new = u - h * du;
        let mut du_new = du;
        let mut pw = -h; // (-h)^(k+1)
        let mut small = 0;
        for k in 0..400usize {
            let kf = k as f64;
            let next = ((kf + a) * c_prev - (kf + 1.0) * (kf + B - z0) * c_cur) / (z0 * (kf + 2.0) * (kf + 1.0));
            du_new += (kf + 2.0) * next * pw;
            pw *= -h;
            u_new += next * pw;
            if (kf + 2.0) * (next * pw).abs() <= 1e-18 * (u_new.abs() + h * du_new.abs()) {
                small += 1;
                if small >= 2 {
                    break;
                }
            } else {
                small = 0;
            }
            c_prev = c_cur;
            c_cur = next;
        }
        u = u_new;
        du = du_new;
        let m = u.abs().max(du.abs());
        if m > 0.0 && m.is_finite() {
            u /= m;
            du /= m;
            log_scale += m.ln();
        }
        z0 -= h;
    }
    u * log_scale.exp()
}

/// Tricomi confluent hypergeometric function `U(a, 1/2, z)` for `z >= 0`.
///
/// Small `z` uses the two-term Kummer-M connection formula, large `z` the
/// asymptotic series, and the region between is bridged by integrating
/// Kummer's equation inward from the asymptotic regime. Negative or NaN `z`
/// returns NaN.
pub fn kummer_u(a: f64, z: f64) -> f64 {
    if !(z >= 0.0) || !a.is_finite() {
        return f64::NAN;
    }
    if let Some(v) = terminating(a, z) {
        return v;
    }
    if z == 0.0 {
        return SQRT_PI * recip_gamma(a + 0.5);
    }
    if z <= series_limit(a) {
        return connection_series(a, z);
    }
    let za = asymptotic_start(a);
    if z >= za {
        let (s, _) = asymptotic_scaled(a, z);
        return s * (-a * z.ln()).exp();
    }
    inward(a, za, z)
}

/// Normalized oscillator eigenfunctions `u_0(x) ..= u_n(x)` via the
/// three-term recurrence.
pub fn oscillator_values(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let u0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(u0);
    if n == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * u0);
    for k in 2..=n {
        let kf = k as f64;
        let v = (2.0 / kf).sqrt() * x * out[k - 1] - ((kf - 1.0) / kf).sqrt() * out[k - 2];
        out.push(v);
    }
    out
}

/// `u_n(x) = N_n H_n(x) exp(-x^2/2)` with unit L2 norm.
pub fn oscillator_eigenfunction(n: usize, x: f64) -> f64 {
    let mut prev = PI.powf(-0.25) * (-0.5 * x * x).exp();
    if n == 0 {
        return prev;
    }
    let mut cur = std::f64::consts::SQRT_2 * x * prev;
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 / kf).sqrt() * x * cur - ((kf - 1.0) / kf).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Values `u_{2k}(0)` for `k < count`.
pub fn even_center_values(count: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(count);
    let mut cur = PI.powf(-0.25);
    for k in 0..count {
        if k > 0 {
            let kf = k as f64;
            cur *= -((2.0 * kf - 1.0) / (2.0 * kf)).sqrt();
        }
        v.push(cur);
    }
    v
}

/// A single harmonic-oscillator eigenstate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OscillatorState {
    pub n: usize,
}

impl OscillatorState {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn value(&self, x: f64) -> f64 {
        oscillator_eigenfunction(self.n, x)
    }

    pub fn energy(&self) -> f64 {
        self.n as f64 + 0.5
    }

    pub fn parity(&self) -> f64 {
        if self.n % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}
