//! Numerical building blocks shared by the physics modules.

pub mod interp;
pub mod jet;
pub mod linalg;
pub mod quad;

/// Polynomial (Neville) extrapolation of `values[i] = F(steps[i])` to
/// `step = 0`. Suitable for Richardson extrapolation when the error expands
/// in integer powers of the step.
pub fn richardson(steps: &[f64], values: &[f64]) -> f64 {
    assert_eq!(steps.len(), values.len());
    let mut p = values.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            let (hi, hj) = (steps[i], steps[i + m]);
            p[i] = (hi * p[i + 1] - hj * p[i]) / (hi - hj);
        }
    }
    p[0]
}

/// Ordinary least-squares line `y = intercept + slope x` with coefficient of
/// determination.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Some(LineFit { slope, intercept, r2 })
}
