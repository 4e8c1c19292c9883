//! Positive-definiteness tests on WH(2) and on the translation group.
//!
//! A tomogram-like `f(X, μ, ν)` is a quantum tomogram exactly when its slice
//! transform `ψ_f(v) = ∫ f(X, v) e^{iX} dX` lifts to a positive-type function
//! `φ(μ, ν, t) = e^{it} ψ_f(μ, ν)` on WH(2), equivalently when `ψ_f` is of
//! ω-positive type. Only finite tuples can be tested, so [`certify`] is a
//! randomized falsifier: `pass` means no violation was found.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Normal, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::linalg::{self, CMatrix};
use crate::tomogram::{
    check_homogeneity, check_nonnegativity, check_normalization, GridSpec, HomogeneitySample, SourceKind,
    TomogramSource,
};
use crate::weyl_heisenberg::{cocycle, compose, inverse, lift, GroupElement, PhasePoint};

pub const MAX_TUPLE: usize = 64;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const DEFAULT_FAIL_TOL: f64 = 1e-6;
pub const NORMALIZATION_FAIL_TOL: f64 = 1e-4;
pub const NONNEGATIVITY_FAIL_TOL: f64 = 1e-8;
pub const HOMOGENEITY_FAIL_TOL: f64 = 1e-6;

/// Trapezoid nodes `(X_i, w_i)` and tomogram values `f(X_i, v)` used for the
/// slice transform at `frequency`. Tabulated rays use their own nodes; other
/// sources get a uniform grid in `y = X/s` over the source's support with step
/// at most `π / (|frequency| s + Ω)`.
#[derive(Debug, Clone)]
pub struct SliceQuadrature {
    pub x: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
}

impl SliceQuadrature {
    pub fn new(src: &TomogramSource, v: PhasePoint, frequency: f64) -> Result<Self> {
        if v.is_origin() {
            return Err(TomoError::DegenerateRay);
        }
        if let TomogramSource::Tabulated(t) = src {
            let r = t.ray(v)?;
            let n = r.x.len();
            let weights = (0..n)
                .map(|i| {
                    let left = if i > 0 { r.x[i] - r.x[i - 1] } else { 0.0 };
                    let right = if i + 1 < n { r.x[i + 1] - r.x[i] } else { 0.0 };
                    0.5 * (left + right)
                })
                .collect();
            return Ok(Self { x: r.x.clone(), weights, values: r.w.clone() });
        }
        let s = v.norm();
        let half = src.unit_support();
        let max_step = std::f64::consts::PI / (frequency.abs() * s + src.unit_bandwidth());
        let intervals = ((2.0 * half / max_step).ceil() as usize).max(16);
        let h = 2.0 * half / intervals as f64;
        let mut x = Vec::with_capacity(intervals + 1);
        let mut weights = Vec::with_capacity(intervals + 1);
        let mut values = Vec::with_capacity(intervals + 1);
        for i in 0..=intervals {
            let xi = s * (-half + h * i as f64);
            let w = src.evaluate(xi, v)?;
            if !w.is_finite() {
                return Err(TomoError::Quadrature(format!("non-finite tomogram value at X = {xi}")));
            }
            x.push(xi);
            weights.push(if i == 0 || i == intervals { 0.5 * s * h } else { s * h });
            values.push(w);
        }
        Ok(Self { x, weights, values })
    }

    /// `Σ w_i f(X_i) e^{i ω X_i}`.
    pub fn transform(&self, frequency: f64) -> Complex64 {
        self.x
            .iter()
            .zip(&self.weights)
            .zip(&self.values)
            .map(|((&x, &w), &f)| Complex64::from_polar(w * f, frequency * x))
            .sum()
    }
}

/// `∫ f(X, v) e^{i ω X} dX` on the automatic slice grid.
pub fn fourier_transform_at(src: &TomogramSource, v: PhasePoint, frequency: f64) -> Result<Complex64> {
    Ok(SliceQuadrature::new(src, v, frequency)?.transform(frequency))
}

/// `ψ_f(v) = ∫ f(X, v) e^{iX} dX`: the transform at unit frequency.
pub fn fourier_slice(src: &TomogramSource, v: PhasePoint) -> Result<Complex64> {
    fourier_transform_at(src, v, 1.0)
}

/// Same transform on a caller-supplied uniform X grid.
pub fn fourier_slice_on(src: &TomogramSource, v: PhasePoint, quad: &GridSpec) -> Result<Complex64> {
    quad.validate()?;
    let h = quad.step();
    let pts = quad.points();
    let last = pts.len() - 1;
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &x) in pts.iter().enumerate() {
        let weight = if i == 0 || i == last { 0.5 } else { 1.0 };
        acc += Complex64::from_polar(weight * src.evaluate(x, v)?, x);
    }
    Ok(acc * h)
}

/// Reference ray used for the zero-frequency value `ψ_f(0)`.
pub fn reference_ray(src: &TomogramSource) -> PhasePoint {
    match src {
        TomogramSource::Tabulated(t) => t.rays[0].ray,
        _ => PhasePoint::new(1.0, 0.0),
    }
}

/// `ψ_f` as a function on the whole plane. At the origin, where the ray is
/// degenerate, it takes the zero-frequency slice `∫ f(X, v̂) dX` on the
/// reference ray, which is the `v → 0` limit under homogeneity.
pub struct SliceFunction<'a> {
    src: &'a TomogramSource,
    origin: Complex64,
}

impl<'a> SliceFunction<'a> {
    pub fn new(src: &'a TomogramSource) -> Result<Self> {
        let origin = fourier_transform_at(src, reference_ray(src), 0.0)?;
        Ok(Self { src, origin })
    }

    pub fn origin_value(&self) -> Complex64 {
        self.origin
    }

    pub fn eval(&self, v: PhasePoint) -> Result<Complex64> {
        if v.is_origin() {
            Ok(self.origin)
        } else {
            fourier_slice(self.src, v)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GramKind {
    /// `M_jk = φ(g_j g_k⁻¹)` on WH(2).
    WhGroup,
    /// `M̃_jk = ψ(v_k − v_j) e^{(i/2) ω(v_k, v_j)}` on the translation group.
    OmegaTwisted,
    /// `M_jk = ψ(v_j − v_k)`, no cocycle phase.
    Classical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GramPoints {
    Group(Vec<GroupElement>),
    Phase(Vec<PhasePoint>),
}

impl GramPoints {
    pub fn len(&self) -> usize {
        match self {
            GramPoints::Group(g) => g.len(),
            GramPoints::Phase(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone)]
pub struct GramMatrix {
    pub kind: GramKind,
    pub points: GramPoints,
    pub matrix: CMatrix,
}

impl GramMatrix {
    pub fn hermiticity_defect(&self) -> f64 {
        linalg::hermiticity_defect(&self.matrix)
    }
}

fn check_tuple(n: usize) -> Result<()> {
    if n == 0 || n > MAX_TUPLE {
        return Err(TomoError::InvalidInput(format!("tuple size must be in 1..={MAX_TUPLE}, got {n}")));
    }
    Ok(())
}

fn fill<F>(n: usize, mut entry: F) -> Result<CMatrix>
where
    F: FnMut(usize, usize) -> Result<Complex64>,
{
    let mut m = CMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            m[(j, k)] = entry(j, k)?;
        }
    }
    Ok(m)
}

/// Naimark matrix `M_jk = φ(g_j ∘ g_k⁻¹)` with `φ(μ, ν, t) = e^{it} ψ(μ, ν)`.
pub fn build_m<F>(psi: F, points: &[GroupElement]) -> Result<GramMatrix>
where
    F: Fn(PhasePoint) -> Result<Complex64>,
{
    check_tuple(points.len())?;
    let matrix = fill(points.len(), |j, k| {
        let g = compose(points[j], inverse(points[k]));
        let value = psi(g.project())?;
        Ok(lift(|_| value, g))
    })?;
    Ok(GramMatrix { kind: GramKind::WhGroup, points: GramPoints::Group(points.to_vec()), matrix })
}

/// ω-positivity matrix `M̃_jk = ψ((v_j)⁻¹∘v_k) e^{(i/2) ω(v_k, v_j)}`, with `(v_j)⁻¹∘v_k = v_k − v_j`.
pub fn build_m_omega<F>(psi: F, points: &[PhasePoint]) -> Result<GramMatrix>
where
    F: Fn(PhasePoint) -> Result<Complex64>,
{
    check_tuple(points.len())?;
    let matrix = fill(points.len(), |j, k| {
        let (vj, vk) = (points[j], points[k]);
        Ok(psi(vk - vj)? * Complex64::from_polar(1.0, 0.5 * cocycle(vk, vj)))
    })?;
    Ok(GramMatrix { kind: GramKind::OmegaTwisted, points: GramPoints::Phase(points.to_vec()), matrix })
}

/// Plain translation-group matrix `M_jk = ψ(v_j − v_k)` (Bochner positivity).
pub fn build_m_classical<F>(psi: F, points: &[PhasePoint]) -> Result<GramMatrix>
where
    F: Fn(PhasePoint) -> Result<Complex64>,
{
    check_tuple(points.len())?;
    let matrix = fill(points.len(), |j, k| psi(points[j] - points[k]))?;
    Ok(GramMatrix { kind: GramKind::Classical, points: GramPoints::Phase(points.to_vec()), matrix })
}

fn hermitian_tolerance(m: &CMatrix) -> f64 {
    HERMITIAN_TOL * m.iter().map(|z| z.norm()).fold(1.0, f64::max)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    let defect = linalg::hermiticity_defect(m);
    if defect > hermitian_tolerance(m) || !defect.is_finite() {
        return Err(TomoError::InvalidMatrix(format!(
            "matrix is not Hermitian (defect {defect:.3e})"
        )));
    }
    Ok(linalg::min_hermitian_eigenvalue(m))
}

/// Finite GNS step: vectors `w_j` with `⟨w_j, w_k⟩ = M_jk`, one coordinate per retained eigenvalue.
pub fn gns_embed(m: &CMatrix) -> Result<Vec<DVector<Complex64>>> {
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let defect = linalg::hermiticity_defect(m);
    if defect > HERMITIAN_TOL * scale {
        return Err(TomoError::InvalidMatrix(format!("matrix is not Hermitian (defect {defect:.3e})")));
    }
    let (values, vectors) = linalg::hermitian_eigen(m);
    let min = values.first().copied().unwrap_or(0.0);
    if min < -1e-10 * scale {
        return Err(TomoError::NotPositive { min_eigenvalue: min });
    }
    let n = m.nrows();
    let top = values.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = top * n as f64 * f64::EPSILON;
    let kept: Vec<usize> = (0..values.len()).filter(|&i| values[i] > cutoff).collect();
    Ok((0..n)
        .map(|j| {
            DVector::from_iterator(
                kept.len(),
                kept.iter().map(|&i| vectors[(j, i)].conj() * values[i].sqrt()),
            )
        })
        .collect())
}

/// Gram matrix `⟨w_j, w_k⟩ = Σ conj(w_j) w_k` of a family of vectors.
pub fn gram_of(vectors: &[DVector<Complex64>]) -> CMatrix {
    let n = vectors.len();
    CMatrix::from_fn(n, n, |j, k| vectors[j].dotc(&vectors[k]))
}

/// Deterministic per-trial generator: stream `trial` of the seeded ChaCha8.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `n` points with independent `N(0, radius²)` coordinates.
pub fn sample_phase_points<R: Rng + ?Sized>(rng: &mut R, n: usize, radius: f64) -> Vec<PhasePoint> {
    (0..n)
        .map(|_| {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            PhasePoint::new(radius * a, radius * b)
        })
        .collect()
}

/// Gaussian phase points lifted with central coordinates uniform on `[0, 2π)`.
pub fn sample_group_elements<R: Rng + ?Sized>(rng: &mut R, n: usize, radius: f64) -> Vec<GroupElement> {
    sample_phase_points(rng, n, radius)
        .into_iter()
        .map(|v| v.with_t(rng.random_range(0.0..std::f64::consts::TAU)))
        .collect()
}

/// Budget for a randomized Gram-matrix search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub trials: usize,
    pub tuple_size: usize,
    pub seed: u64,
    pub radius: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { trials: 200, tuple_size: 16, seed: 42, radius: 2.0 }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(TomoError::InvalidInput("at least one trial is required".into()));
        }
        if !(2..=MAX_TUPLE).contains(&self.tuple_size) {
            return Err(TomoError::InvalidInput(format!(
                "tuple size must be in 2..={MAX_TUPLE}, got {}",
                self.tuple_size
            )));
        }
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(TomoError::InvalidInput(format!("radius must be positive, got {}", self.radius)));
        }
        Ok(())
    }
}

/// Outcome of a randomized search for a negative Gram eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramSearch {
    pub kind: GramKind,
    pub trials_run: usize,
    pub min_eigenvalue: f64,
    pub witness_trial: usize,
    pub witness: GramPoints,
    pub max_hermiticity_defect: f64,
}

/// Samples `trials` tuples (independently seeded per trial), builds the Gram
/// matrix of the given kind and keeps the tuple with the smallest eigenvalue.
pub fn search_min_eigenvalue<F>(kind: GramKind, psi: F, cfg: &SearchConfig) -> Result<GramSearch>
where
    F: Fn(PhasePoint) -> Result<Complex64> + Sync,
{
    cfg.validate()?;
    let outcomes: Vec<(f64, f64, GramPoints)> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial as u64);
            let gram = match kind {
                GramKind::WhGroup => build_m(&psi, &sample_group_elements(&mut rng, cfg.tuple_size, cfg.radius))?,
                GramKind::OmegaTwisted => {
                    build_m_omega(&psi, &sample_phase_points(&mut rng, cfg.tuple_size, cfg.radius))?
                }
                GramKind::Classical => {
                    build_m_classical(&psi, &sample_phase_points(&mut rng, cfg.tuple_size, cfg.radius))?
                }
            };
            Ok((min_eigenvalue(&gram.matrix)?, gram.hermiticity_defect(), gram.points))
        })
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.0 < outcomes[best].0 {
            best = i;
        }
    }
    let max_defect = outcomes.iter().map(|o| o.1).fold(0.0, f64::max);
    let (min, _, witness) = outcomes.into_iter().nth(best).expect("at least one trial");
    Ok(GramSearch {
        kind,
        trials_run: cfg.trials,
        min_eigenvalue: min,
        witness_trial: best,
        witness,
        max_hermiticity_defect: max_defect,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationCheck {
    pub ray: PhasePoint,
    pub integral: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonnegativityCheck {
    pub ray: PhasePoint,
    pub min_value: f64,
    pub argmin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneityCheck {
    pub samples: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct PropertyChecks {
    pub normalization: Vec<NormalizationCheck>,
    pub nonnegativity: Vec<NonnegativityCheck>,
    pub homogeneity: Option<HomogeneityCheck>,
}

impl PropertyChecks {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in self.normalization.iter().filter(|c| !c.pass) {
            out.push(format!(
                "normalization on ray ({}, {}) is {:.6} (|1 - value| > {NORMALIZATION_FAIL_TOL:e})",
                c.ray.mu, c.ray.nu, c.integral
            ));
        }
        for c in self.nonnegativity.iter().filter(|c| !c.pass) {
            out.push(format!(
                "negative value {:.6e} at X = {:.4} on ray ({}, {})",
                c.min_value, c.argmin, c.ray.mu, c.ray.nu
            ));
        }
        if let Some(h) = self.homogeneity.as_ref().filter(|h| !h.pass) {
            out.push(format!("homogeneity deviation {:.3e} > {HOMOGENEITY_FAIL_TOL:e}", h.max_deviation));
        }
        out
    }
}

/// Certification parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyConfig {
    pub trials: usize,
    pub tuple_size: usize,
    pub seed: u64,
    pub radius: f64,
    pub fail_tol: f64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self { trials: 200, tuple_size: 16, seed: 42, radius: 2.0, fail_tol: DEFAULT_FAIL_TOL }
    }
}

impl CertifyConfig {
    /// Eigenvalues below `-fail_tol * tuple_size` count as violations.
    pub fn threshold(&self) -> f64 {
        -self.fail_tol * self.tuple_size as f64
    }

    pub fn search(&self) -> SearchConfig {
        SearchConfig { trials: self.trials, tuple_size: self.tuple_size, seed: self.seed, radius: self.radius }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub verdict: Verdict,
    pub source: String,
    pub source_kind: SourceKind,
    pub seed: u64,
    pub trials: usize,
    pub tuple_size: usize,
    pub radius: f64,
    pub fail_tol: f64,
    pub eigenvalue_threshold: f64,
    pub min_eigenvalue_overall: Option<f64>,
    pub witness_trial: Option<usize>,
    pub witness: Option<Vec<PhasePoint>>,
    pub property_checks: PropertyChecks,
    pub failures: Vec<String>,
    pub diagnostics: Vec<String>,
}

fn property_rays(src: &TomogramSource) -> Vec<PhasePoint> {
    match src {
        TomogramSource::Tabulated(t) => t.rays.iter().take(8).map(|r| r.ray).collect(),
        _ => vec![
            PhasePoint::new(1.0, 0.0),
            PhasePoint::new(0.0, 1.0),
            PhasePoint::new(1.0, 1.0),
            PhasePoint::new(0.5, -2.0),
        ],
    }
}

fn homogeneity_samples(src: &TomogramSource, seed: u64) -> Vec<HomogeneitySample> {
    let mut rng = trial_rng(seed, u64::MAX);
    match src {
        TomogramSource::Tabulated(t) => {
            // Only pairs of tabulated rays related by a scalar can be compared.
            let mut out = Vec::new();
            for a in &t.rays {
                for b in &t.rays {
                    if a.ray == b.ray || cocycle(a.ray, b.ray).abs() > 1e-9 * a.ray.norm() * b.ray.norm() {
                        continue;
                    }
                    let lambda = if a.ray.mu.abs() > a.ray.nu.abs() { b.ray.mu / a.ray.mu } else { b.ray.nu / a.ray.nu };
                    let (lo, hi) = (a.x[0], a.x[a.x.len() - 1]);
                    for _ in 0..4 {
                        let x = rng.random_range(lo..hi);
                        out.push(HomogeneitySample { x, ray: a.ray, lambda });
                    }
                }
            }
            out
        }
        _ => {
            let normal = Normal::new(0.0, 1.0).expect("unit normal");
            (0..20)
                .map(|_| {
                    let ray = PhasePoint::new(rng.sample(normal), rng.sample(normal));
                    let x = ray.norm() * rng.sample(normal);
                    let mag: f64 = 4f64.powf(rng.random_range(-1.0..1.0));
                    let lambda = if rng.random_bool(0.5) { mag } else { -mag };
                    HomogeneitySample { x, ray, lambda }
                })
                .collect()
        }
    }
}

fn run_property_checks(src: &TomogramSource, seed: u64, diagnostics: &mut Vec<String>) -> PropertyChecks {
    let mut checks = PropertyChecks::default();
    for ray in property_rays(src) {
        let grid = match src.auto_grid(ray, 401) {
            Ok(g) => g,
            Err(e) => {
                diagnostics.push(format!("no grid for ray ({}, {}): {e}", ray.mu, ray.nu));
                continue;
            }
        };
        match check_normalization(src, ray, &grid) {
            Ok(integral) => checks.normalization.push(NormalizationCheck {
                ray,
                integral,
                pass: (integral - 1.0).abs() <= NORMALIZATION_FAIL_TOL,
            }),
            Err(e) => diagnostics.push(format!("normalization on ray ({}, {}) failed: {e}", ray.mu, ray.nu)),
        }
        match check_nonnegativity(src, ray, &grid) {
            Ok(r) => checks.nonnegativity.push(NonnegativityCheck {
                ray,
                min_value: r.min_value,
                argmin: r.argmin,
                pass: r.min_value >= -NONNEGATIVITY_FAIL_TOL,
            }),
            Err(e) => diagnostics.push(format!("nonnegativity scan on ray ({}, {}) failed: {e}", ray.mu, ray.nu)),
        }
    }
    let samples = homogeneity_samples(src, seed);
    if samples.is_empty() {
        diagnostics.push("homogeneity not checked: no pair of tabulated rays is related by scaling".into());
    } else {
        match check_homogeneity(src, &samples) {
            Ok(dev) => {
                checks.homogeneity = Some(HomogeneityCheck {
                    samples: samples.len(),
                    max_deviation: dev,
                    pass: dev <= HOMOGENEITY_FAIL_TOL,
                })
            }
            Err(e) => diagnostics.push(format!("homogeneity check failed: {e}")),
        }
    }
    checks
}

/// Tuples drawn from the tabulated rays whose pairwise differences are also tabulated (or zero).
fn tabulated_tuple(src: &TomogramSource, rng: &mut ChaCha8Rng, size: usize) -> Vec<PhasePoint> {
    let TomogramSource::Tabulated(t) = src else { return Vec::new() };
    let mut pool: Vec<PhasePoint> = std::iter::once(PhasePoint::ORIGIN).chain(t.rays.iter().map(|r| r.ray)).collect();
    for i in (1..pool.len()).rev() {
        let j = rng.random_range(0..=i);
        pool.swap(i, j);
    }
    let known = |d: PhasePoint| d.is_origin() || t.find(d).is_some();
    let mut tuple: Vec<PhasePoint> = Vec::new();
    for p in pool {
        if tuple.len() == size {
            break;
        }
        if tuple.iter().all(|&q| known(p - q) && known(q - p)) {
            tuple.push(p);
        }
    }
    tuple
}

/// Randomized certification of a candidate tomogram.
///
/// Runs the normalization, nonnegativity and homogeneity checks, then samples
/// `trials` Gaussian tuples of phase points and tests the ω-positivity matrix
/// of `ψ_f`. The verdict is `fail` when a property check fails decisively or
/// an eigenvalue drops below `-fail_tol * tuple_size`, `inconclusive` when
/// evaluation broke down, and `pass` otherwise.
pub fn certify(src: &TomogramSource, cfg: &CertifyConfig) -> Result<CertificationReport> {
    cfg.search().validate()?;
    let mut diagnostics = Vec::new();
    let property_checks = run_property_checks(src, cfg.seed, &mut diagnostics);
    let mut failures = property_checks.failures();

    let mut min_overall = None;
    let mut witness = None;
    let mut witness_trial = None;
    let gram = SliceFunction::new(src).and_then(|slice| {
        let psi = |v: PhasePoint| slice.eval(v);
        if src.kind() == SourceKind::Tabulated {
            let outcomes: Vec<Option<(f64, Vec<PhasePoint>)>> = (0..cfg.trials)
                .map(|trial| {
                    let mut rng = trial_rng(cfg.seed, trial as u64);
                    let tuple = tabulated_tuple(src, &mut rng, cfg.tuple_size);
                    if tuple.len() < 2 {
                        return Ok(None);
                    }
                    let m = build_m_omega(psi, &tuple)?;
                    Ok(Some((min_eigenvalue(&m.matrix)?, tuple)))
                })
                .collect::<Result<_>>()?;
            let best = outcomes
                .into_iter()
                .enumerate()
                .filter_map(|(i, o)| o.map(|(m, t)| (i, m, t)))
                .fold(None::<(usize, f64, Vec<PhasePoint>)>, |acc, cur| match acc {
                    Some(a) if a.1 <= cur.1 => Some(a),
                    _ => Some(cur),
                });
            Ok(best)
        } else {
            let found = search_min_eigenvalue(GramKind::OmegaTwisted, psi, &cfg.search())?;
            let GramPoints::Phase(points) = found.witness else { unreachable!("omega search samples phase points") };
            Ok(Some((found.witness_trial, found.min_eigenvalue, points)))
        }
    });
    let mut evaluation_failed = false;
    match gram {
        Ok(Some((trial, min, points))) => {
            if min < cfg.threshold() {
                failures.push(format!(
                    "omega-positivity violated: eigenvalue {min:.6e} < {:.1e} in trial {trial}",
                    cfg.threshold()
                ));
            }
            min_overall = Some(min);
            witness_trial = Some(trial);
            witness = Some(points);
        }
        Ok(None) => {
            evaluation_failed = true;
            diagnostics.push("no tuple of tabulated rays has all pairwise differences tabulated".into());
        }
        Err(e) => {
            evaluation_failed = true;
            diagnostics.push(format!("Gram evaluation failed: {e}"));
        }
    }
    if !diagnostics.is_empty() {
        evaluation_failed = true;
    }

    let verdict = if !failures.is_empty() {
        Verdict::Fail
    } else if evaluation_failed {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(CertificationReport {
        verdict,
        source: src.describe(),
        source_kind: src.kind(),
        seed: cfg.seed,
        trials: cfg.trials,
        tuple_size: cfg.tuple_size,
        radius: cfg.radius,
        fail_tol: cfg.fail_tol,
        eigenvalue_threshold: cfg.threshold(),
        min_eigenvalue_overall: min_overall,
        witness_trial,
        witness,
        property_checks,
        failures,
        diagnostics,
    })
}
