//! The Weyl–Heisenberg group WH(2), its displacement-operator representation
//! in the truncated Fock basis, and characteristic functions of states.

use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::fock::{canonical_operators, DensityState};
use crate::linalg::CMatrix;

/// Sign `s` in `D(v) D(w) = exp(-(i/2) s ω(v, w)) D(v + w)` for `D(v) = exp(i(μQ + νP))`.
///
/// With `[Q, P] = i` the Baker–Campbell–Hausdorff phase gives `s = +1`.
pub const PROJECTIVE_SIGN: f64 = 1.0;

/// Trusted block of a truncated displacement matrix is the first `dim - dim / DEFAULT_BUFFER_DIVISOR` levels.
pub const DEFAULT_BUFFER_DIVISOR: usize = 2;

/// Point of the translation group, i.e. WH(2) modulo its centre.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct PhasePoint {
    pub mu: f64,
    pub nu: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { mu: 0.0, nu: 0.0 };

    pub const fn new(mu: f64, nu: f64) -> Self {
        Self { mu, nu }
    }

    pub fn norm(self) -> f64 {
        self.mu.hypot(self.nu)
    }

    pub fn is_origin(self) -> bool {
        self.mu == 0.0 && self.nu == 0.0
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(k * self.mu, k * self.nu)
    }

    /// Lift to the group with central coordinate `t`.
    pub fn with_t(self, t: f64) -> GroupElement {
        GroupElement::new(self.mu, self.nu, t)
    }

    /// Polar form `(s, θ)` with `s = |v|`, `θ = atan2(ν, μ)`.
    pub fn polar(self) -> (f64, f64) {
        (self.norm(), self.nu.atan2(self.mu))
    }
}

impl From<[f64; 2]> for PhasePoint {
    fn from(a: [f64; 2]) -> Self {
        Self::new(a[0], a[1])
    }
}

impl From<PhasePoint> for [f64; 2] {
    fn from(v: PhasePoint) -> Self {
        [v.mu, v.nu]
    }
}

impl Add for PhasePoint {
    type Output = PhasePoint;
    fn add(self, o: PhasePoint) -> PhasePoint {
        PhasePoint::new(self.mu + o.mu, self.nu + o.nu)
    }
}

impl Sub for PhasePoint {
    type Output = PhasePoint;
    fn sub(self, o: PhasePoint) -> PhasePoint {
        PhasePoint::new(self.mu - o.mu, self.nu - o.nu)
    }
}

impl Neg for PhasePoint {
    type Output = PhasePoint;
    fn neg(self) -> PhasePoint {
        PhasePoint::new(-self.mu, -self.nu)
    }
}

/// Element `(μ, ν, t)` of WH(2).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct GroupElement {
    pub mu: f64,
    pub nu: f64,
    pub t: f64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { mu: 0.0, nu: 0.0, t: 0.0 };

    pub const fn new(mu: f64, nu: f64, t: f64) -> Self {
        Self { mu, nu, t }
    }

    pub fn project(self) -> PhasePoint {
        PhasePoint::new(self.mu, self.nu)
    }
}

impl From<[f64; 3]> for GroupElement {
    fn from(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<GroupElement> for [f64; 3] {
    fn from(g: GroupElement) -> Self {
        [g.mu, g.nu, g.t]
    }
}

/// Symplectic form `ω((μ,ν),(μ',ν')) = μν' − νμ'`.
pub fn cocycle(v: PhasePoint, w: PhasePoint) -> f64 {
    v.mu * w.nu - v.nu * w.mu
}

/// Group law `(v, t)∘(w, t') = (v + w, t + t' + ω(v, w)/2)`.
pub fn compose(g: GroupElement, h: GroupElement) -> GroupElement {
    GroupElement::new(
        g.mu + h.mu,
        g.nu + h.nu,
        g.t + h.t + 0.5 * cocycle(g.project(), h.project()),
    )
}

pub fn inverse(g: GroupElement) -> GroupElement {
    GroupElement::new(-g.mu, -g.nu, -g.t)
}

/// `(μ, ν) = (e^λ cos θ, e^{−λ} sin θ)`. Not surjective onto ℝ²; (μ, ν) stay the primary coordinates.
pub fn symplectic_params(lambda: f64, theta: f64) -> PhasePoint {
    PhasePoint::new(lambda.exp() * theta.cos(), (-lambda).exp() * theta.sin())
}

/// Coherent amplitude α with `exp(i(μQ + νP)) = exp(α a† − α* a)`.
pub fn coherent_amplitude(v: PhasePoint) -> Complex64 {
    Complex64::new(-v.nu, v.mu) * std::f64::consts::FRAC_1_SQRT_2
}

/// Truncated matrix of `D(μ, ν) = exp(i(μQ + νP))`.
#[derive(Debug, Clone)]
pub struct DisplacementMatrix {
    pub point: PhasePoint,
    pub matrix: CMatrix,
}

impl DisplacementMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Size of the trusted top-left block.
    pub fn trusted_dim(&self) -> usize {
        trusted_dim(self.dim())
    }

    pub fn trusted_block(&self) -> CMatrix {
        let b = self.trusted_dim();
        self.matrix.view((0, 0), (b, b)).into_owned()
    }

    /// `max |(C† C − 1)_{jk}|` where `C` holds the first `trusted_dim` columns.
    pub fn buffered_unitarity_defect(&self) -> f64 {
        let b = self.trusted_dim();
        let cols = self.matrix.columns(0, b);
        let gram = cols.adjoint() * cols;
        let mut worst: f64 = 0.0;
        for j in 0..b {
            for k in 0..b {
                let expect = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((gram[(j, k)] - expect).norm());
            }
        }
        worst
    }

    /// Errors when the trusted block has lost unitarity beyond `tol`.
    pub fn ensure_trusted(self, tol: f64) -> Result<Self> {
        let defect = self.buffered_unitarity_defect();
        if defect > tol || !defect.is_finite() {
            return Err(TomoError::Truncation(format!(
                "displacement ({}, {}) at dim {}: buffered-block unitarity defect {defect:.2e} exceeds {tol:e}",
                self.point.mu,
                self.point.nu,
                self.dim()
            )));
        }
        Ok(self)
    }
}

pub fn trusted_dim(dim: usize) -> usize {
    dim - dim / DEFAULT_BUFFER_DIVISOR
}

/// Oracle route: matrix exponential of the truncated generator `i(μQ + νP)`.
pub fn displacement_expm(v: PhasePoint, dim: usize) -> Result<DisplacementMatrix> {
    let ops = canonical_operators(dim)?;
    let generator = (ops.q.scale(v.mu) + ops.p.scale(v.nu)) * Complex64::new(0.0, 1.0);
    Ok(DisplacementMatrix {
        point: v,
        matrix: generator.exp(),
    })
}

/// Fast route: exact matrix elements from associated Laguerre polynomials.
///
/// For `m = n + k`, `⟨m|D|n⟩ = √(n!/m!) α^k e^{−|α|²/2} L_n^{(k)}(|α|²)` and
/// `⟨n|D|m⟩ = √(n!/m!) (−α*)^k e^{−|α|²/2} L_n^{(k)}(|α|²)`. The entries are
/// those of the untruncated operator.
pub fn displacement_closed_form(v: PhasePoint, dim: usize) -> Result<DisplacementMatrix> {
    if dim < 2 {
        return Err(TomoError::InvalidInput(format!("displacement needs dim >= 2, got {dim}")));
    }
    Ok(DisplacementMatrix {
        point: v,
        matrix: displacement_block(v, dim),
    })
}

/// Closed-form elements `⟨m|D(v)|n⟩` for `m, n < dim` (any `dim >= 1`).
pub fn displacement_block(v: PhasePoint, dim: usize) -> CMatrix {
    let alpha = coherent_amplitude(v);
    let x = alpha.norm_sqr();
    let unit = if x > 0.0 { alpha / alpha.norm() } else { Complex64::new(1.0, 0.0) };
    let mut out = CMatrix::zeros(dim, dim);
    let mut ell = vec![0.0; dim];
    let mut lower_phase = Complex64::new(1.0, 0.0); // e^{ikφ}
    let mut log_fact = 0.0; // ln k!
    for k in 0..dim {
        if k > 0 {
            lower_phase *= unit;
            log_fact += (k as f64).ln();
        }
        let len = dim - k;
        normalized_laguerre(k, x, log_fact, &mut ell[..len]);
        let upper_phase = lower_phase.conj() * if k % 2 == 0 { 1.0 } else { -1.0 };
        for n in 0..len {
            out[(n + k, n)] = lower_phase * ell[n];
            if k > 0 {
                out[(n, n + k)] = upper_phase * ell[n];
            }
        }
    }
    out
}

/// Columns of a block of a unitary cannot have norm above one; larger values
/// mean the recurrences lost accuracy.
pub fn check_bessel(block: &CMatrix, v: PhasePoint) -> Result<()> {
    for (n, col) in block.column_iter().enumerate() {
        let norm2: f64 = col.iter().map(|z| z.norm_sqr()).sum();
        if !(norm2 <= 1.0 + 1e-8) {
            return Err(TomoError::Truncation(format!(
                "displacement elements at ({}, {}) violate the Bessel bound (column {n} norm² = {norm2:e})",
                v.mu, v.nu
            )));
        }
    }
    Ok(())
}

const RESCALE: f64 = 1e150;
const LOG_RESCALE: f64 = 345.387_763_949_107;

/// `ℓ_n^{(k)}(x) = √(n!/(n+k)!) x^{k/2} e^{−x/2} L_n^{(k)}(x)` for `n < out.len()`.
fn normalized_laguerre(k: usize, x: f64, log_k_fact: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let kf = k as f64;
    if x == 0.0 {
        out.iter_mut().for_each(|o| *o = if k == 0 { 1.0 } else { 0.0 });
        return;
    }
    let mut log_scale = -0.5 * x + 0.5 * kf * x.ln() - 0.5 * log_k_fact;
    let mut prev = 0.0;
    let mut cur = 1.0;
    out[0] = log_scale.exp();
    for n in 0..out.len() - 1 {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 + kf - x) * cur - (nf * (nf + kf)).sqrt() * prev)
            / ((nf + 1.0) * (nf + kf + 1.0)).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += LOG_RESCALE;
        }
        out[n + 1] = if cur == 0.0 { 0.0 } else { cur * log_scale.exp() };
    }
}

/// Characteristic function `ψ_ρ(v) = Tr[ρ D(v)]` of a fixed state.
///
/// Only `⟨m|D|n⟩` with `m, n` inside the state's support enter the trace, and
/// those are evaluated exactly, so no truncation of `D` is involved. The guard
/// checks the Bessel inequality on the evaluated columns to catch loss of
/// accuracy in the recurrences.
#[derive(Debug, Clone)]
pub struct CharacteristicFunction {
    rho: DensityState,
}

impl CharacteristicFunction {
    pub fn new(rho: &DensityState) -> Self {
        Self { rho: rho.trimmed() }
    }

    pub fn state(&self) -> &DensityState {
        &self.rho
    }

    pub fn eval(&self, v: PhasePoint) -> Result<Complex64> {
        let d = self.rho.dim();
        let block = displacement_block(v, d);
        check_bessel(&block, v)?;
        let rho = self.rho.matrix();
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..d {
            for n in 0..d {
                acc += rho[(m, n)] * block[(n, m)];
            }
        }
        Ok(acc)
    }
}

pub fn characteristic_fn(rho: &DensityState, v: PhasePoint) -> Result<Complex64> {
    CharacteristicFunction::new(rho).eval(v)
}

/// `φ(μ, ν, t) = e^{it} ψ(μ, ν)`: the representation `U(μ,ν,t) = D(μ,ν) e^{it}` with γ = 1.
pub fn lift<F>(psi: F, g: GroupElement) -> Complex64
where
    F: Fn(PhasePoint) -> Complex64,
{
    Complex64::from_polar(1.0, g.t) * psi(g.project())
}

/// Phase `exp(-(i/2) s ω(v, w))` relating `D(v) D(w)` to `D(v + w)`.
pub fn composition_phase(v: PhasePoint, w: PhasePoint) -> Complex64 {
    Complex64::from_polar(1.0, -0.5 * PROJECTIVE_SIGN * cocycle(v, w))
}
