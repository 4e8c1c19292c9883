//! Truncated Fock-basis states and canonical operators.
//!
//! Conventions: `hbar = 1`, `Q = (a + a†)/√2`, `P = (a - a†)/(i√2)`, so that
//! `[Q, P] = i` and the vacuum quadrature variance is 1/2. Every other module
//! works in this convention.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::linalg::{self, CMatrix};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;

/// A validated density matrix in the truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    matrix: CMatrix,
}

impl DensityState {
    /// Validates Hermiticity, unit trace and positivity; the error lists every failed invariant.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() == 0 || matrix.nrows() != matrix.ncols() {
            return Err(TomoError::InvalidInput(format!(
                "density matrix must be square and non-empty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let failures = state_defects(&matrix);
        if failures.is_empty() {
            Ok(Self { matrix })
        } else {
            Err(TomoError::InvalidState(failures))
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.matrix[(m, n)]
    }

    /// `Tr ρ²` by direct matrix trace.
    pub fn purity(&self) -> f64 {
        linalg::trace(&(&self.matrix * &self.matrix)).re
    }

    /// Expectation value `Tr(ρ A)` of an operator of at least the state's dimension.
    pub fn expectation(&self, op: &CMatrix) -> Complex64 {
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.matrix[(i, j)] * op[(j, i)];
            }
        }
        acc
    }

    /// One past the highest Fock level with a non-zero row or column.
    pub fn support_dim(&self) -> usize {
        let n = self.dim();
        (0..n)
            .rev()
            .find(|&k| (0..n).any(|j| self.matrix[(k, j)] != Complex64::new(0.0, 0.0) || self.matrix[(j, k)] != Complex64::new(0.0, 0.0)))
            .map_or(1, |k| k + 1)
    }

    /// Drop trailing Fock levels that carry no weight at all.
    pub fn trimmed(&self) -> DensityState {
        let k = self.support_dim();
        DensityState {
            matrix: self.matrix.view((0, 0), (k, k)).into_owned(),
        }
    }

    /// Zero-pad to a larger truncation.
    pub fn embedded(&self, dim: usize) -> DensityState {
        DensityState {
            matrix: linalg::embed(&self.matrix, dim),
        }
    }

    pub fn to_file(&self) -> StateFile {
        StateFile::from_matrix(&self.matrix)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        StateFile::from_json(&text)?.into_state()
    }
}

fn state_defects(m: &CMatrix) -> Vec<String> {
    let mut failures = Vec::new();
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        failures.push("matrix contains non-finite entries".to_string());
        return failures;
    }
    let herm = linalg::hermiticity_defect(m);
    if herm > HERMITICITY_TOL {
        failures.push(format!("not Hermitian: max |rho_mn - conj(rho_nm)| = {herm:.3e} > {HERMITICITY_TOL:e}"));
    }
    let tr = linalg::trace(m);
    if (tr - 1.0).norm() > TRACE_TOL {
        failures.push(format!("trace {:.12} differs from 1 by more than {TRACE_TOL:e}", tr.re));
    }
    let min_eig = linalg::min_hermitian_eigenvalue(m);
    if min_eig < -PSD_TOL {
        failures.push(format!("not positive semidefinite: minimal eigenvalue {min_eig:.3e} < -{PSD_TOL:e}"));
    }
    failures
}

/// On-disk state format: `{ "dim": N, "rho_re": [[..]], "rho_im": [[..]] }`.
///
/// A free-form `metadata` block is carried along untouched.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub rho_re: Vec<Vec<f64>>,
    pub rho_im: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

impl StateFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.nrows();
        Self {
            dim: n,
            rho_re: (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect(),
            rho_im: (0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect(),
            metadata: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.dim;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if n == 0 || !shape_ok(&self.rho_re) || !shape_ok(&self.rho_im) {
            return Err(TomoError::InvalidInput(format!(
                "state file declares dim {n} but rho_re/rho_im are not {n}x{n}"
            )));
        }
        Ok(CMatrix::from_fn(n, n, |i, j| Complex64::new(self.rho_re[i][j], self.rho_im[i][j])))
    }

    pub fn into_state(self) -> Result<DensityState> {
        DensityState::from_matrix(self.to_matrix()?)
    }
}

/// `|ψ⟩⟨ψ|` for a (not necessarily normalized) coefficient vector.
pub fn make_pure(coefficients: &[Complex64]) -> Result<DensityState> {
    let norm_sqr: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
    if coefficients.is_empty() || !(norm_sqr > 0.0) || !norm_sqr.is_finite() {
        return Err(TomoError::InvalidInput("pure-state coefficients must have positive finite norm".into()));
    }
    let scale = norm_sqr.sqrt().recip();
    let psi: Vec<Complex64> = coefficients.iter().map(|c| c * scale).collect();
    let n = psi.len();
    let matrix = CMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj());
    Ok(DensityState { matrix: linalg::hermitian_part(&matrix) })
}

/// Number state `|n⟩` in a truncation of `dim` levels.
pub fn fock_state(n: usize, dim: usize) -> Result<DensityState> {
    if n >= dim {
        return Err(TomoError::InvalidInput(format!("Fock level {n} does not fit in dimension {dim}")));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
    coeffs[n] = Complex64::new(1.0, 0.0);
    make_pure(&coeffs)
}

/// Thermal state with mean occupation `nbar`, renormalized after truncation.
pub fn make_thermal(nbar: f64, dim: usize) -> Result<DensityState> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(TomoError::InvalidInput(format!("mean occupation must be non-negative, got {nbar}")));
    }
    if dim == 0 {
        return Err(TomoError::InvalidInput("dimension must be positive".into()));
    }
    let ratio = nbar / (nbar + 1.0);
    let tail = ratio.powi(dim as i32);
    if tail >= 1e-12 {
        return Err(TomoError::InvalidInput(format!(
            "dimension {dim} too small for nbar = {nbar}: truncated tail weight {tail:.2e} >= 1e-12"
        )));
    }
    let weights: Vec<f64> = (0..dim).map(|n| ratio.powi(n as i32)).collect();
    let total: f64 = weights.iter().sum();
    let mut matrix = CMatrix::zeros(dim, dim);
    for (n, w) in weights.iter().enumerate() {
        matrix[(n, n)] = Complex64::new(w / total, 0.0);
    }
    Ok(DensityState { matrix })
}

/// Smallest truncation that keeps the thermal tail below 1e-12.
pub fn thermal_dim(nbar: f64) -> usize {
    if nbar <= 0.0 {
        return 1;
    }
    let ratio = nbar / (nbar + 1.0);
    ((1e-12f64).ln() / ratio.ln()).floor() as usize + 1
}

/// Haar-like random pure state (normalized complex Gaussian vector).
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityState {
    let coeffs: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    make_pure(&coeffs).expect("Gaussian vector has positive norm")
}

/// Random mixed state `G G† / Tr(G G†)` from a `dim x rank` Ginibre matrix.
pub fn random_density_state<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityState {
    let g = CMatrix::from_fn(dim, rank.max(1), |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let gg = &g * g.adjoint();
    let tr = linalg::trace(&gg).re;
    DensityState {
        matrix: linalg::hermitian_part(&gg.unscale(tr)),
    }
}

/// Position and momentum in the truncated Fock basis.
#[derive(Debug, Clone)]
pub struct CanonicalOperators {
    pub q: CMatrix,
    pub p: CMatrix,
}

impl CanonicalOperators {
    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    /// `Q² ` and `P²` restricted to the first `dim` levels, exact for states supported there.
    pub fn squares(dim: usize) -> Result<(CMatrix, CMatrix)> {
        let ops = canonical_operators(dim + 1)?;
        let q2 = (&ops.q * &ops.q).view((0, 0), (dim, dim)).into_owned();
        let p2 = (&ops.p * &ops.p).view((0, 0), (dim, dim)).into_owned();
        Ok((q2, p2))
    }
}

pub fn canonical_operators(dim: usize) -> Result<CanonicalOperators> {
    if dim < 2 {
        return Err(TomoError::InvalidInput(format!("canonical operators need dim >= 2, got {dim}")));
    }
    let mut q = CMatrix::zeros(dim, dim);
    let mut p = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        let s = (n as f64 / 2.0).sqrt();
        // a_{n-1,n} = √n
        q[(n - 1, n)] = Complex64::new(s, 0.0);
        q[(n, n - 1)] = Complex64::new(s, 0.0);
        p[(n - 1, n)] = Complex64::new(0.0, -s);
        p[(n, n - 1)] = Complex64::new(0.0, s);
    }
    Ok(CanonicalOperators { q, p })
}

const LOG_RESCALE: f64 = 345.387_763_949_107; // ln(1e150)
const RESCALE: f64 = 1e150;

/// Orthonormal oscillator eigenfunctions `u_0(x) .. u_{count-1}(x)`.
///
/// Uses the normalized three-term recurrence with a running exponent so that
/// neither the Gaussian factor nor intermediate values under/overflow.
pub fn hermite_functions(count: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let mut log_scale = -0.5 * x * x;
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    out.push(cur * log_scale.exp());
    for n in 0..count.saturating_sub(1) {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += LOG_RESCALE;
        }
        out.push(if cur == 0.0 { 0.0 } else { cur * log_scale.exp() });
    }
    out
}

/// Single oscillator eigenfunction `u_n(x)`.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    hermite_functions(n + 1, x)[n]
}
