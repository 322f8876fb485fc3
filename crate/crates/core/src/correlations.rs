//! Two-body wavefunction, reduced single-particle density matrix and the
//! entanglement measures built from it.
//!
//! The two-body state is `Psi(x1, x2) = psi_0(X) phi(xr)` with
//! `X = (x1 + x2)/sqrt(2)`, `xr = (x1 - x2)/sqrt(2)` and `psi_0` the
//! centre-of-mass ground state. Matrices are stored weight-symmetrized,
//! `A = W^(1/2) Psi W^(1/2)`, so that `rho = A A^dagger` is Hermitian with
//! unit trace and its eigenvalues are the occupations `lambda_n`.

use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::interp::ComplexSpline;
use crate::static2b::RelativeEigenstate;
use crate::tdse::WaveState;

/// Eigenvalues below zero but above this are treated as round-off.
pub const NEGATIVE_EIGENVALUE_FLOOR: f64 = -1e-9;

/// Occupations above this count towards the Schmidt rank.
pub const SCHMIDT_THRESHOLD: f64 = 1e-8;

/// Symmetric uniform grid with trapezoid weights.
#[derive(Clone, Debug, PartialEq)]
pub struct UniformGrid {
    xs: Vec<f64>,
    weights: Vec<f64>,
}

impl Default for UniformGrid {
    fn default() -> Self {
        Self::new(6.0, 241).expect("default grid is valid")
    }
}

impl UniformGrid {
    /// `points` nodes on `[-half_width, half_width]`; `points` must be odd so
    /// that the origin is a node.
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) || points < 3 || points % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "grid needs a positive half width and an odd number (>= 3) of points, got {half_width} and {points}"
            )));
        }
        let dx = 2.0 * half_width / (points - 1) as f64;
        let mid = (points / 2) as f64;
        let xs = (0..points).map(|i| (i as f64 - mid) * dx).collect();
        let mut weights = vec![dx; points];
        weights[0] = 0.5 * dx;
        weights[points - 1] = 0.5 * dx;
        Ok(Self { xs, weights })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.xs[1] - self.xs[0]
    }

    pub fn half_width(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    /// Distinct values of `(x_i - x_j)/sqrt(2)`, i.e. `k dx / sqrt(2)` for
    /// `k = -(n-1) ..= n-1`. The same set covers `(x_i + x_j)/sqrt(2)`.
    pub fn rotated_nodes(&self) -> Vec<f64> {
        let n = self.len() as i64;
        let h = self.spacing() / std::f64::consts::SQRT_2;
        (-(n - 1)..n).map(|k| k as f64 * h).collect()
    }
}

/// Centre-of-mass ground state `pi^(-1/4) exp(-X^2/2)`.
pub fn com_ground(x: f64) -> f64 {
    std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp()
}

/// Two-body amplitude table `Psi(x1_i, x2_j)` on a product grid.
#[derive(Clone, Debug)]
pub struct TwoBodyState {
    grid: UniformGrid,
    psi: DMatrix<Complex64>,
}

impl TwoBodyState {
    /// Tabulates `psi_0(X) phi(xr)` without normalizing. `phi` is called
    /// once per distinct relative coordinate.
    pub fn from_relative<F>(grid: &UniformGrid, phi: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<Vec<Complex64>>,
    {
        let nodes = grid.rotated_nodes();
        let rel = phi(&nodes)?;
        if rel.len() != nodes.len() {
            return Err(Error::InvalidArgument("relative sampler returned the wrong number of values".into()));
        }
        let com: Vec<f64> = nodes.iter().map(|&x| com_ground(x)).collect();
        let n = grid.len();
        // node index of (i - j) and of (i + j) - (n - 1)
        let psi = DMatrix::from_fn(n, n, |i, j| rel[n - 1 + i - j] * com[i + j]);
        Ok(Self { grid: grid.clone(), psi })
    }

    pub fn from_table(grid: &UniformGrid, psi: DMatrix<Complex64>) -> Result<Self> {
        if psi.nrows() != grid.len() || psi.ncols() != grid.len() {
            return Err(Error::GridMismatch(format!("table is {}x{}, grid has {} points", psi.nrows(), psi.ncols(), grid.len())));
        }
        Ok(Self { grid: grid.clone(), psi })
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &DMatrix<Complex64> {
        &self.psi
    }

    /// Weighted double sum of `|Psi|^2`.
    pub fn norm_sqr(&self) -> f64 {
        let w = self.grid.weights();
        let n = self.grid.len();
        let mut acc = 0.0;
        for j in 0..n {
            for i in 0..n {
                acc += w[i] * w[j] * self.psi[(i, j)].norm_sqr();
            }
        }
        acc
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm_sqr();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidArgument(format!("cannot normalize a state of norm {norm}")));
        }
        self.psi /= Complex64::new(norm.sqrt(), 0.0);
        Ok(self)
    }

    /// Largest `|Psi(x1, x2) - Psi(x2, x1)|`.
    pub fn symmetry_residual(&self) -> f64 {
        (&self.psi - self.psi.transpose()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `W^(1/2) Psi W^(1/2)`.
    fn weighted(&self) -> DMatrix<Complex64> {
        let s: Vec<f64> = self.grid.weights().iter().map(|w| w.sqrt()).collect();
        DMatrix::from_fn(self.grid.len(), self.grid.len(), |i, j| self.psi[(i, j)] * (s[i] * s[j]))
    }
}

/// Builds the normalized two-body state from relative-coordinate samples,
/// interpolated onto the rotated coordinates by a natural cubic spline.
pub fn assemble_two_body(xs: &[f64], relative: &[Complex64], grid: &UniformGrid) -> Result<TwoBodyState> {
    let spline = ComplexSpline::new(xs.to_vec(), relative.to_vec())?;
    TwoBodyState::from_relative(grid, |nodes| nodes.iter().map(|&x| spline.eval(x)).collect())?.normalized()
}

/// Normalized two-body state of a stationary relative eigenstate.
pub fn two_body_from_eigenstate(state: &RelativeEigenstate, grid: &UniformGrid) -> Result<TwoBodyState> {
    TwoBodyState::from_relative(grid, |nodes| Ok(nodes.iter().map(|&x| Complex64::new(state.value(x), 0.0)).collect()))?
        .normalized()
}

/// Normalized two-body state of a spectral wavefunction, sampled exactly at
/// the rotated nodes.
pub fn two_body_from_wave(state: &WaveState, grid: &UniformGrid) -> Result<TwoBodyState> {
    TwoBodyState::from_relative(grid, |nodes| Ok(state.to_position(nodes)))?.normalized()
}

/// Weight-symmetrized reduced single-particle density matrix with its
/// spectrum (descending).
#[derive(Clone, Debug)]
pub struct Rspdm {
    grid: UniformGrid,
    matrix: DMatrix<Complex64>,
    lambda: Vec<f64>,
}

/// `rho(x, x') = int Psi(x, x2) Psi*(x', x2) dx2`, tracing out the second
/// particle.
pub fn rspdm(state: &TwoBodyState) -> Result<Rspdm> {
    let a = state.weighted();
    Rspdm::from_weighted(state.grid.clone(), &a * a.adjoint())
}

/// Same reduction with the first particle traced out.
pub fn rspdm_second(state: &TwoBodyState) -> Result<Rspdm> {
    let a = state.weighted();
    Rspdm::from_weighted(state.grid.clone(), a.transpose() * a.conjugate())
}

impl Rspdm {
    fn from_weighted(grid: UniformGrid, mut matrix: DMatrix<Complex64>) -> Result<Self> {
        // remove the round-off anti-Hermitian part before diagonalizing
        let n = matrix.nrows();
        for i in 0..n {
            matrix[(i, i)].im = 0.0;
            for j in 0..i {
                let avg = 0.5 * (matrix[(i, j)] + matrix[(j, i)].conj());
                matrix[(i, j)] = avg;
                matrix[(j, i)] = avg.conj();
            }
        }
        let lambda = hermitian_eigenvalues(&matrix)?;
        if let Some(&min) = lambda.last() {
            if min < NEGATIVE_EIGENVALUE_FLOOR {
                return Err(Error::InvalidArgument(format!("density matrix has eigenvalue {min}")));
            }
        }
        Ok(Self { grid, matrix, lambda })
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    /// `W^(1/2) rho W^(1/2)`.
    pub fn weighted_matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Kernel value `rho(x_i, x_j)`.
    pub fn kernel(&self, i: usize, j: usize) -> Complex64 {
        let w = self.grid.weights();
        self.matrix[(i, j)] / (w[i] * w[j]).sqrt()
    }

    /// Occupations in descending order, raw (not clamped).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.lambda
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn schmidt_rank(&self) -> usize {
        self.lambda.iter().filter(|&&l| l > SCHMIDT_THRESHOLD).count()
    }

    /// Long-format table `x,xp,re,im` of the kernel `rho(x, x')`.
    pub fn write_matrix_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["x", "xp", "re", "im"])?;
        let xs = self.grid.xs();
        for i in 0..xs.len() {
            for j in 0..xs.len() {
                let z = self.kernel(i, j);
                out.write_record([xs[i].to_string(), xs[j].to_string(), z.re.to_string(), z.im.to_string()])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// Spectrum as `n,lambda`.
    pub fn write_lambda_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["n", "lambda"])?;
        for (n, l) in self.lambda.iter().enumerate() {
            out.write_record([n.to_string(), l.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::InvalidArgument("Hermitian eigensolver did not converge".into()))?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}

/// Von Neumann entropy in bits, `-sum lambda log2 lambda`.
pub fn entropy(rho: &Rspdm) -> f64 {
    rho.lambda.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.log2()).sum::<f64>().max(0.0)
}

/// `(1/2) Tr |rho_a - rho_b|`, clipped to `[0, 1]`.
pub fn trace_distance(a: &Rspdm, b: &Rspdm) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch("density matrices live on different grids".into()));
    }
    let diff = &a.matrix - &b.matrix;
    let vals = hermitian_eigenvalues(&diff)?;
    Ok((0.5 * vals.iter().map(|v| v.abs()).sum::<f64>()).clamp(0.0, 1.0))
}

pub fn delta_entropy(s_dynamic: f64, s_target: f64) -> f64 {
    s_dynamic - s_target
}

/// Entanglement of a state compared against a target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntanglementReport {
    pub entropy: f64,
    pub target_entropy: f64,
    pub schmidt_rank: usize,
    pub delta_entropy: f64,
    pub trace_distance: f64,
}

impl EntanglementReport {
    pub fn compare(rho: &Rspdm, target: &Rspdm) -> Result<Self> {
        let s = entropy(rho);
        let s_t = entropy(target);
        Ok(Self {
            entropy: s,
            target_entropy: s_t,
            schmidt_rank: rho.schmidt_rank(),
            delta_entropy: delta_entropy(s, s_t),
            trace_distance: trace_distance(rho, target)?,
        })
    }
}
