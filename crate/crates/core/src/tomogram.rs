//! Symplectic tomograms `W(X, μ, ν)`.
//!
//! State-derived tomograms are evaluated as rotated-quadrature densities
//! `W(X, v) = pr_θ(X/s)/s` with `s = |v|`, `θ = atan2(ν, μ)`; the Fourier
//! integral `W(X, v) = ∫ e^{ikX} ψ(−k v) dk/2π` serves as the independent
//! oracle route.

use std::f64::consts::PI;
use std::io::Read;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::fock::{hermite_functions, CanonicalOperators, DensityState};
use crate::quadrature::{adaptive_trapezoid, linspace, trapezoid_nodes};
use crate::weyl_heisenberg::{CharacteristicFunction, PhasePoint};

/// X-grid plus the rays `(μ, ν)` to evaluate on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_x: usize,
    #[serde(default)]
    pub rays: Vec<PhasePoint>,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_x: usize, rays: Vec<PhasePoint>) -> Result<Self> {
        let g = Self { x_min, x_max, n_x, rays };
        g.validate()?;
        Ok(g)
    }

    /// Symmetric grid `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n_x: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_x, Vec::new())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min < self.x_max) || !self.x_min.is_finite() || !self.x_max.is_finite() {
            return Err(TomoError::InvalidInput(format!(
                "grid needs x_min < x_max, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        if self.n_x < 2 {
            return Err(TomoError::InvalidInput(format!("grid needs n_x >= 2, got {}", self.n_x)));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_x - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.n_x)
    }
}

/// Parse `"mu1,nu1;mu2,nu2;..."`.
pub fn parse_rays(text: &str) -> Result<Vec<PhasePoint>> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| TomoError::InvalidInput(format!("cannot parse ray component {s:?}")))
            };
            match parts.as_slice() {
                [mu, nu] => Ok(PhasePoint::new(parse(mu)?, parse(nu)?)),
                _ => Err(TomoError::InvalidInput(format!("ray {pair:?} is not of the form mu,nu"))),
            }
        })
        .collect()
}

fn ray_polar(v: PhasePoint) -> Result<(f64, f64)> {
    if v.is_origin() || !v.mu.is_finite() || !v.nu.is_finite() {
        return Err(TomoError::DegenerateRay);
    }
    Ok(v.polar())
}

/// Rotated-quadrature route for a state restricted to its support.
#[derive(Debug, Clone)]
pub struct StateTomogram {
    rho: DensityState,
}

impl StateTomogram {
    pub fn new(rho: &DensityState) -> Self {
        Self { rho: rho.trimmed() }
    }

    pub fn state(&self) -> &DensityState {
        &self.rho
    }

    /// `pr_θ(x) = Σ ρ_mn e^{−iθ(m−n)} u_m(x) u_n(x)`.
    pub fn quadrature_density(&self, theta: f64, x: f64) -> f64 {
        let d = self.rho.dim();
        let u = hermite_functions(d, x);
        let a: Vec<Complex64> = u
            .iter()
            .enumerate()
            .map(|(m, &um)| Complex64::from_polar(um, -theta * m as f64))
            .collect();
        let rho = self.rho.matrix();
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..d {
            let mut row = Complex64::new(0.0, 0.0);
            for n in 0..d {
                row += rho[(m, n)] * a[n].conj();
            }
            acc += a[m] * row;
        }
        acc.re
    }

    pub fn eval(&self, x: f64, v: PhasePoint) -> Result<f64> {
        let (s, theta) = ray_polar(v)?;
        Ok(self.quadrature_density(theta, x / s) / s)
    }

    /// Half-width in units of `s` beyond which the tomogram is negligible.
    pub fn unit_support(&self) -> f64 {
        (2.0 * self.rho.dim() as f64 + 1.0).sqrt() + 8.0
    }

    /// Radius beyond which `|ψ(κ v̂)|` is negligible.
    pub fn unit_bandwidth(&self) -> f64 {
        2.0 * (2.0 * self.rho.dim() as f64 + 1.0).sqrt() + 10.0
    }
}

/// `W(X, μ, ν)` of a density state via the rotated-quadrature density.
pub fn eval_from_state(rho: &DensityState, x: f64, v: PhasePoint) -> Result<f64> {
    StateTomogram::new(rho).eval(x, v)
}

/// Oracle route: discrete Fourier transform of `k ↦ ψ(−k v)` sampled on a
/// reciprocal k-grid, returned on the grid's X-points.
pub fn tomogram_via_fft(rho: &DensityState, grid: &GridSpec, v: PhasePoint) -> Result<Vec<f64>> {
    grid.validate()?;
    let (s, _) = ray_polar(v)?;
    let st = StateTomogram::new(rho);
    let chi = CharacteristicFunction::new(rho);

    let k_needed = st.unit_bandwidth() / s;
    let dx = grid.step();
    let refine = ((dx * k_needed / PI).ceil() as usize).max(1);
    let delta = dx / refine as f64;
    let reach = grid.x_min.abs().max(grid.x_max.abs()) + s * st.unit_support();
    let len_min = ((grid.n_x - 1) * refine + 1).max((reach / delta).ceil() as usize + 1);
    let len = len_min.next_power_of_two();
    let dk = 2.0 * PI / (len as f64 * delta);

    let mut spectrum: Vec<Complex64> = (0..len)
        .into_par_iter()
        .map(|l| {
            let k = (l as f64 - (len / 2) as f64) * dk;
            chi.eval(v.scale(-k)).map(|psi| psi * Complex64::from_polar(1.0, k * grid.x_min))
        })
        .collect::<Result<_>>()?;
    FftPlanner::<f64>::new().plan_fft_inverse(len).process(&mut spectrum);

    let norm = dk / (2.0 * PI);
    Ok((0..grid.n_x)
        .map(|i| {
            let j = i * refine;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            norm * sign * spectrum[j].re
        })
        .collect())
}

/// Vacuum tomogram `exp(−X²/s²)/√(π s²)`.
pub fn vacuum_tomogram(x: f64, v: PhasePoint) -> Result<f64> {
    let (s, _) = ray_polar(v)?;
    let s2 = s * s;
    Ok((-x * x / s2).exp() / (PI * s2).sqrt())
}

/// The tomogram-like function `exp(−X²/(2s²)) (5s² − X²) / √(2 s⁶)`, `s² = μ² + ν²`.
pub fn counterexample_f(x: f64, v: PhasePoint) -> Result<f64> {
    ray_polar(v)?;
    let s2 = v.mu * v.mu + v.nu * v.nu;
    Ok((-x * x / (2.0 * s2)).exp() * (5.0 * s2 - x * x) / (2.0 * s2 * s2 * s2).sqrt())
}

/// One tabulated ray.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedRay {
    pub ray: PhasePoint,
    pub x: Vec<f64>,
    pub w: Vec<f64>,
}

/// Tomogram samples on a fixed set of rays. Values are interpolated linearly
/// in X along a ray and are zero outside the tabulated range; no interpolation
/// across rays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedTomogram {
    pub rays: Vec<TabulatedRay>,
}

impl TabulatedTomogram {
    pub fn new(mut rays: Vec<TabulatedRay>) -> Result<Self> {
        if rays.is_empty() {
            return Err(TomoError::InvalidInput("tabulated tomogram has no rays".into()));
        }
        for r in &mut rays {
            if r.ray.is_origin() {
                return Err(TomoError::DegenerateRay);
            }
            if r.x.len() != r.w.len() || r.x.len() < 2 {
                return Err(TomoError::InvalidInput(format!(
                    "ray ({}, {}) needs matching x/w columns with at least two samples",
                    r.ray.mu, r.ray.nu
                )));
            }
            let mut pairs: Vec<(f64, f64)> = r.x.iter().copied().zip(r.w.iter().copied()).collect();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            if pairs.windows(2).any(|p| p[0].0 == p[1].0) {
                return Err(TomoError::InvalidInput(format!(
                    "ray ({}, {}) has repeated X values",
                    r.ray.mu, r.ray.nu
                )));
            }
            (r.x, r.w) = pairs.into_iter().unzip();
        }
        Ok(Self { rays })
    }

    /// Reads the `X,mu,nu,W` CSV layout written by the tomogram command.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            #[serde(rename = "X")]
            x: f64,
            mu: f64,
            nu: f64,
            #[serde(rename = "W")]
            w: f64,
        }
        let mut rays: Vec<TabulatedRay> = Vec::new();
        for row in csv::Reader::from_reader(reader).deserialize::<Row>() {
            let row = row?;
            let p = PhasePoint::new(row.mu, row.nu);
            match rays.iter_mut().find(|r| r.ray == p) {
                Some(r) => {
                    r.x.push(row.x);
                    r.w.push(row.w);
                }
                None => rays.push(TabulatedRay { ray: p, x: vec![row.x], w: vec![row.w] }),
            }
        }
        Self::new(rays)
    }

    pub fn find(&self, v: PhasePoint) -> Option<&TabulatedRay> {
        let tol = 1e-9 * v.norm().max(1.0);
        self.rays
            .iter()
            .find(|r| (r.ray.mu - v.mu).abs() <= tol && (r.ray.nu - v.nu).abs() <= tol)
    }

    pub fn ray(&self, v: PhasePoint) -> Result<&TabulatedRay> {
        self.find(v).ok_or(TomoError::RayNotTabulated { mu: v.mu, nu: v.nu })
    }

    pub fn eval(&self, x: f64, v: PhasePoint) -> Result<f64> {
        if v.is_origin() {
            return Err(TomoError::DegenerateRay);
        }
        let r = self.ray(v)?;
        let n = r.x.len();
        if x < r.x[0] || x > r.x[n - 1] {
            return Ok(0.0);
        }
        let i = r.x.partition_point(|&t| t <= x).clamp(1, n - 1);
        let (x0, x1) = (r.x[i - 1], r.x[i]);
        let f = (x - x0) / (x1 - x0);
        Ok(r.w[i - 1] + f * (r.w[i] - r.w[i - 1]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceKind {
    StateDerived,
    AnalyticVacuum,
    AnalyticCounterexample,
    Tabulated,
}

/// A tomogram-like function `W(X, μ, ν)` that can be evaluated pointwise.
#[derive(Debug, Clone)]
pub enum TomogramSource {
    State(StateTomogram),
    Vacuum,
    Counterexample,
    Tabulated(TabulatedTomogram),
}

impl TomogramSource {
    pub fn from_state(rho: &DensityState) -> Self {
        TomogramSource::State(StateTomogram::new(rho))
    }

    pub fn kind(&self) -> SourceKind {
        match self {
            TomogramSource::State(_) => SourceKind::StateDerived,
            TomogramSource::Vacuum => SourceKind::AnalyticVacuum,
            TomogramSource::Counterexample => SourceKind::AnalyticCounterexample,
            TomogramSource::Tabulated(_) => SourceKind::Tabulated,
        }
    }

    pub fn state(&self) -> Option<&DensityState> {
        match self {
            TomogramSource::State(st) => Some(st.state()),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            TomogramSource::State(st) => format!("state-derived (support dim {})", st.state().dim()),
            TomogramSource::Vacuum => "analytic vacuum".into(),
            TomogramSource::Counterexample => "analytic counterexample".into(),
            TomogramSource::Tabulated(t) => format!("tabulated ({} rays)", t.rays.len()),
        }
    }

    pub fn evaluate(&self, x: f64, v: PhasePoint) -> Result<f64> {
        match self {
            TomogramSource::State(st) => st.eval(x, v),
            TomogramSource::Vacuum => vacuum_tomogram(x, v),
            TomogramSource::Counterexample => counterexample_f(x, v),
            TomogramSource::Tabulated(t) => t.eval(x, v),
        }
    }

    /// Half-width (in units of `|v|`) outside of which `W` is negligible.
    pub fn unit_support(&self) -> f64 {
        match self {
            TomogramSource::State(st) => st.unit_support(),
            TomogramSource::Vacuum => 9.0,
            TomogramSource::Counterexample => 12.0,
            TomogramSource::Tabulated(t) => t
                .rays
                .iter()
                .map(|r| r.x[0].abs().max(r.x[r.x.len() - 1].abs()) / r.ray.norm())
                .fold(0.0, f64::max),
        }
    }

    /// Radius beyond which the slice Fourier transform along a unit ray is negligible.
    pub fn unit_bandwidth(&self) -> f64 {
        match self {
            TomogramSource::State(st) => st.unit_bandwidth(),
            TomogramSource::Vacuum => 10.0,
            TomogramSource::Counterexample => 9.0,
            TomogramSource::Tabulated(_) => f64::INFINITY,
        }
    }

    /// A symmetric grid covering the support of the ray `v`.
    pub fn auto_grid(&self, v: PhasePoint, n_x: usize) -> Result<GridSpec> {
        if let TomogramSource::Tabulated(t) = self {
            let r = t.ray(v)?;
            return GridSpec::new(r.x[0], r.x[r.x.len() - 1], n_x, vec![v]);
        }
        let (s, _) = ray_polar(v)?;
        GridSpec::new(-s * self.unit_support(), s * self.unit_support(), n_x, vec![v])
    }
}

/// `∫ W(X, μ, ν) dX` by trapezoid refinement on the grid's range (or the tabulated nodes).
pub fn check_normalization(src: &TomogramSource, v: PhasePoint, quad: &GridSpec) -> Result<f64> {
    moment(src, v, quad, 0)
}

fn moment(src: &TomogramSource, v: PhasePoint, quad: &GridSpec, power: i32) -> Result<f64> {
    quad.validate()?;
    if let TomogramSource::Tabulated(t) = src {
        let r = t.ray(v)?;
        let y: Vec<f64> = r.x.iter().zip(&r.w).map(|(x, w)| x.powi(power) * w).collect();
        return Ok(trapezoid_nodes(&r.x, &y));
    }
    adaptive_trapezoid(
        |x| Ok(x.powi(power) * src.evaluate(x, v)?),
        quad.x_min,
        quad.x_max,
        quad.n_x,
        1e-13,
        14,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonnegativityReport {
    pub min_value: f64,
    pub argmin: f64,
}

/// Scan the grid for the smallest tomogram value.
pub fn check_nonnegativity(src: &TomogramSource, v: PhasePoint, grid: &GridSpec) -> Result<NonnegativityReport> {
    grid.validate()?;
    let mut best = NonnegativityReport { min_value: f64::INFINITY, argmin: f64::NAN };
    for x in grid.points() {
        let w = src.evaluate(x, v)?;
        if w < best.min_value {
            best = NonnegativityReport { min_value: w, argmin: x };
        }
    }
    Ok(best)
}

/// One homogeneity probe `(X, v, λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomogeneitySample {
    pub x: f64,
    pub ray: PhasePoint,
    pub lambda: f64,
}

/// `max |W(λX, λv) − W(X, v)/|λ||` over the samples.
pub fn check_homogeneity(src: &TomogramSource, samples: &[HomogeneitySample]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for s in samples {
        if s.lambda == 0.0 || !s.lambda.is_finite() {
            return Err(TomoError::InvalidInput("homogeneity needs a non-zero finite scale".into()));
        }
        let scaled = src.evaluate(s.lambda * s.x, s.ray.scale(s.lambda))?;
        let base = src.evaluate(s.x, s.ray)? / s.lambda.abs();
        worst = worst.max((scaled - base).abs());
    }
    Ok(worst)
}

/// `⟨P²⟩ = ∫ X² W(X, 0, 1) dX`.
pub fn second_moment_p(src: &TomogramSource, quad: &GridSpec) -> Result<f64> {
    moment(src, PhasePoint::new(0.0, 1.0), quad, 2)
}

/// `⟨Q²⟩ = ∫ X² W(X, 1, 0) dX`.
pub fn second_moment_q(src: &TomogramSource, quad: &GridSpec) -> Result<f64> {
    moment(src, PhasePoint::new(1.0, 0.0), quad, 2)
}

/// `(Tr ρQ², Tr ρP²)` computed in the Fock basis.
pub fn fock_second_moments(rho: &DensityState) -> Result<(f64, f64)> {
    let rho = rho.trimmed();
    let (q2, p2) = CanonicalOperators::squares(rho.dim().max(1))?;
    Ok((rho.expectation(&q2).re, rho.expectation(&p2).re))
}
