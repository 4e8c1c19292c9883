//! Uniform-grid quadrature rules.

use crate::error::{Result, TomoError};
use crate::weyl_heisenberg::PhasePoint;

/// `n` equispaced points on `[a, b]`, endpoints included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + h * i as f64).collect()
}

/// Composite trapezoid rule on equispaced samples.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => h * (values[1..n - 1].iter().sum::<f64>() + 0.5 * (values[0] + values[n - 1])),
    }
}

/// Trapezoid rule on arbitrary ascending nodes.
pub fn trapezoid_nodes(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// Trapezoid rule refined by interval halving until successive estimates agree.
///
/// Starts from `n0` points and halves the step at most `max_halvings` times.
pub fn adaptive_trapezoid<F>(f: F, a: f64, b: f64, n0: usize, tol: f64, max_halvings: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(b > a) || n0 < 2 {
        return Err(TomoError::Quadrature(format!("bad interval [{a}, {b}] with {n0} points")));
    }
    let mut intervals = n0 - 1;
    let mut h = (b - a) / intervals as f64;
    let mut sum = 0.5 * (f(a)? + f(b)?);
    for i in 1..intervals {
        sum += f(a + h * i as f64)?;
    }
    let mut estimate = h * sum;
    for _ in 0..max_halvings {
        for i in 0..intervals {
            sum += f(a + h * (i as f64 + 0.5))?;
        }
        intervals *= 2;
        h *= 0.5;
        let refined = h * sum;
        if !refined.is_finite() {
            return Err(TomoError::Quadrature("integrand produced a non-finite value".into()));
        }
        let converged = (refined - estimate).abs() <= tol * refined.abs().max(1.0);
        estimate = refined;
        if converged {
            return Ok(estimate);
        }
    }
    Err(TomoError::Quadrature(format!(
        "trapezoid rule on [{a}, {b}] did not converge to {tol:e} after {max_halvings} halvings"
    )))
}

/// Uniform tensor grid on `[-R, R]²` masked to the closed disk of radius `R`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DiskGrid {
    pub radius: f64,
    pub nodes: usize,
}

impl DiskGrid {
    pub fn new(radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0) || nodes < 2 {
            return Err(TomoError::InvalidInput(format!(
                "disk grid needs radius > 0 and at least 2 nodes per axis (got R = {radius}, nodes = {nodes})"
            )));
        }
        Ok(Self { radius, nodes })
    }

    pub fn step(&self) -> f64 {
        2.0 * self.radius / (self.nodes - 1) as f64
    }

    /// Cell weight `h²` shared by every retained node.
    pub fn weight(&self) -> f64 {
        self.step() * self.step()
    }

    /// Retained nodes grouped by grid row, in a fixed order.
    pub fn rows(&self) -> Vec<Vec<PhasePoint>> {
        let axis = linspace(-self.radius, self.radius, self.nodes);
        let r2 = self.radius * self.radius * (1.0 + 1e-12);
        axis.iter()
            .map(|&mu| {
                axis.iter()
                    .filter(|&&nu| mu * mu + nu * nu <= r2)
                    .map(|&nu| PhasePoint::new(mu, nu))
                    .collect()
            })
            .collect()
    }

    pub fn points(&self) -> Vec<PhasePoint> {
        self.rows().into_iter().flatten().collect()
    }
}
