//! Tridiagonal solvers and eigenvalue bracketing.

use num_complex::Complex64;

/// Thomas algorithm for `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`
/// (`sub[0]` and `sup[n-1]` are ignored).
pub fn solve_tridiagonal_real(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = diag[0];
    c[0] = if n > 1 { sup[0] / denom } else { 0.0 };
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - sub[i] * c[i - 1];
        if i + 1 < n {
            c[i] = sup[i] / denom;
        }
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    d
}

/// Complex Thomas solve for a matrix with constant off-diagonals `off`.
pub fn solve_tridiagonal_complex(off: Complex64, diag: &[Complex64], rhs: &[Complex64], out: &mut [Complex64]) {
    let n = diag.len();
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    let mut denom = diag[0];
    c[0] = off / denom;
    out[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - off * c[i - 1];
        c[i] = off / denom;
        out[i] = (rhs[i] - off * out[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        let next = out[i + 1];
        out[i] -= c[i] * next;
    }
}

/// Number of eigenvalues below `lambda` of the symmetric tridiagonal matrix
/// with diagonal `diag` and off-diagonal `off` (Sturm sequence count).
pub fn sturm_count(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let denom = if q == 0.0 { f64::EPSILON * (off[i - 1].abs() + 1.0) } else { q };
        q = diag[i] - lambda - off[i - 1] * off[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k`-th smallest eigenvalue (0-based) of a symmetric tridiagonal
/// matrix by Sturm bisection.
pub fn tridiagonal_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i < off.len() { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thomas_solves_diagonally_dominant_system() {
        let n = 6;
        let sub = vec![1.0; n];
        let diag = vec![4.0; n];
        let sup = vec![-1.0; n];
        let x: Vec<f64> = (0..n).map(|i| i as f64 - 2.5).collect();
        let rhs: Vec<f64> = (0..n)
            .map(|i| {
                let mut r = diag[i] * x[i];
                if i > 0 {
                    r += sub[i] * x[i - 1];
                }
                if i + 1 < n {
                    r += sup[i] * x[i + 1];
                }
                r
            })
            .collect();
        let sol = solve_tridiagonal_real(&sub, &diag, &sup, &rhs);
        for (a, b) in sol.iter().zip(&x) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn sturm_bisection_matches_discrete_laplacian() {
        let n = 50;
        let diag = vec![2.0; n];
        let off = vec![-1.0; n - 1];
        for k in [0, 3, 49] {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((tridiagonal_eigenvalue(&diag, &off, k) - exact).abs() < 1e-12);
        }
    }
}
