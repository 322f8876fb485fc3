//! One-dimensional interpolants: monotone cubic Hermite (for tabulated ramps)
//! and natural cubic splines (for resampling wavefunctions).

use num_complex::Complex64;

use super::linalg::solve_tridiagonal_real;
use crate::error::{Error, Result};

fn locate(xs: &[f64], x: f64) -> usize {
    // index i with xs[i] <= x <= xs[i+1], clamped to valid intervals
    match xs.binary_search_by(|v| v.total_cmp(&x)) {
        Ok(i) => i.min(xs.len() - 2),
        Err(i) => i.saturating_sub(1).min(xs.len() - 2),
    }
}

fn check_knots(xs: &[f64], ys_len: usize) -> Result<()> {
    if xs.len() < 2 || xs.len() != ys_len {
        return Err(Error::InvalidArgument(format!(
            "interpolation needs >= 2 knots with matching values (got {} knots, {} values)",
            xs.len(),
            ys_len
        )));
    }
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("interpolation knots must be strictly increasing".into()));
    }
    Ok(())
}

/// Fritsch–Carlson monotone piecewise cubic Hermite interpolant. Reproduces
/// the knot values exactly and never overshoots between monotone data.
#[derive(Clone, Debug)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        check_knots(&xs, ys.len())?;
        let n = xs.len();
        let secants: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();
        let mut slopes = vec![0.0; n];
        slopes[0] = secants[0];
        slopes[n - 1] = secants[n - 2];
        for i in 1..n - 1 {
            let (d0, d1) = (secants[i - 1], secants[i]);
            slopes[i] = if d0 * d1 <= 0.0 {
                0.0
            } else {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                (w1 + w2) / (w1 / d0 + w2 / d1)
            };
        }
        Ok(Self { xs, ys, slopes })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    /// Value, first and second derivative at `x` (clamped to the domain).
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let (lo, hi) = self.domain();
        let x = x.clamp(lo, hi);
        let i = locate(&self.xs, x);
        let h = self.xs[i + 1] - self.xs[i];
        let s = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let v = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * m1;
        let d = (6.0 * s2 - 6.0 * s) * y0 + (3.0 * s2 - 4.0 * s + 1.0) * m0 + (-6.0 * s2 + 6.0 * s) * y1 + (3.0 * s2 - 2.0 * s) * m1;
        let dd = (12.0 * s - 6.0) * y0 + (6.0 * s - 4.0) * m0 + (-12.0 * s + 6.0) * y1 + (6.0 * s - 2.0) * m1;
        (v, d / h, dd / (h * h))
    }
}

/// Natural cubic spline through complex samples (real and imaginary parts
/// splined independently).
#[derive(Clone, Debug)]
pub struct ComplexSpline {
    xs: Vec<f64>,
    ys: Vec<Complex64>,
    second: Vec<Complex64>,
}

fn natural_second_derivatives(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    if n < 3 {
        return vec![0.0; n];
    }
    let m = n - 2;
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for k in 0..m {
        let i = k + 1;
        let h0 = xs[i] - xs[i - 1];
        let h1 = xs[i + 1] - xs[i];
        sub[k] = h0;
        diag[k] = 2.0 * (h0 + h1);
        sup[k] = h1;
        rhs[k] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
    }
    let inner = solve_tridiagonal_real(&sub, &diag, &sup, &rhs);
    let mut out = vec![0.0; n];
    out[1..n - 1].copy_from_slice(&inner);
    out
}

impl ComplexSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<Complex64>) -> Result<Self> {
        check_knots(&xs, ys.len())?;
        let re: Vec<f64> = ys.iter().map(|c| c.re).collect();
        let im: Vec<f64> = ys.iter().map(|c| c.im).collect();
        let sr = natural_second_derivatives(&xs, &re);
        let si = natural_second_derivatives(&xs, &im);
        let second = sr.into_iter().zip(si).map(|(r, i)| Complex64::new(r, i)).collect();
        Ok(Self { xs, ys, second })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    pub fn eval(&self, x: f64) -> Result<Complex64> {
        let (lo, hi) = self.domain();
        let slack = 1e-12 * (hi - lo);
        if x < lo - slack || x > hi + slack {
            return Err(Error::OutOfRange { x, lo, hi });
        }
        let x = x.clamp(lo, hi);
        let i = locate(&self.xs, x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        let y = self.ys[i] * a
            + self.ys[i + 1] * b
            + (self.second[i] * (a * a * a - a) + self.second[i + 1] * (b * b * b - b)) * (h * h / 6.0);
        Ok(y)
    }
}
