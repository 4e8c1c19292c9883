//! Inverse quantum Radon transform and purity functionals.
//!
//! `ρ = (1/2π) ∫ ψ_f(v) D(−v) dv` with `ψ_f` computed from the tomogram by
//! [`fourier_slice`](crate::positivity::fourier_slice). Reconstruction never
//! projects onto the state cone; [`validate_as_state`] is a separate step.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Result, TomoError};
use crate::fock::{DensityState, StateFile};
use crate::linalg::{self, CMatrix};
use crate::positivity::{SliceFunction, SliceQuadrature};
use crate::quadrature::DiskGrid;
use crate::tomogram::TomogramSource;
use crate::weyl_heisenberg::{check_bessel, displacement_block, PhasePoint};

pub const DEFAULT_DISK_RADIUS: f64 = 8.0;
pub const DEFAULT_DISK_NODES: usize = 128;

#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    rho: CMatrix,
    pub trace: Complex64,
    pub min_eigenvalue: f64,
    pub hermiticity_defect: f64,
    pub grid: DiskGrid,
    /// Largest `|ψ_f|` on the outermost ring of nodes. The disk is large
    /// enough only when this is negligible.
    pub boundary_psi_max: Option<f64>,
}

impl ReconstructionResult {
    /// Wraps a raw matrix, computing the diagnostics from it.
    pub fn new(rho: CMatrix, grid: DiskGrid) -> Self {
        let trace = linalg::trace(&rho);
        let min_eigenvalue = linalg::min_hermitian_eigenvalue(&linalg::hermitian_part(&rho));
        let hermiticity_defect = linalg::hermiticity_defect(&rho);
        Self { rho, trace, min_eigenvalue, hermiticity_defect, grid, boundary_psi_max: None }
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    /// Raw matrix in the state-file format, with the diagnostics as metadata.
    pub fn to_state_file(&self, source: &str) -> StateFile {
        let mut file = StateFile::from_matrix(&self.rho);
        file.metadata = Some(json!({
            "kind": "raw-reconstruction",
            "source": source,
            "disk_radius": self.grid.radius,
            "nodes": self.grid.nodes,
            "trace_re": self.trace.re,
            "trace_im": self.trace.im,
            "min_eigenvalue": self.min_eigenvalue,
            "hermiticity_defect": self.hermiticity_defect,
            "boundary_psi_max": self.boundary_psi_max,
        }));
        file
    }
}

/// Sums per-row partial results in row order, each row in node order.
fn ordered_disk_sum<T, F>(grid: &DiskGrid, zero: T, eval: F) -> Result<T>
where
    T: Send + Sync + Clone + std::ops::AddAssign,
    F: Fn(PhasePoint) -> Result<T> + Sync,
{
    let partials: Vec<T> = grid
        .rows()
        .into_par_iter()
        .map(|row| {
            let mut acc = zero.clone();
            for v in row {
                acc += eval(v)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = zero;
    for p in partials {
        total += p;
    }
    Ok(total)
}

/// Reconstructs the `dim × dim` Fock block of the operator encoded by `src`.
pub fn inverse_radon(src: &TomogramSource, dim: usize, grid: &DiskGrid) -> Result<ReconstructionResult> {
    if dim < 2 {
        return Err(TomoError::InvalidInput(format!("reconstruction needs dim >= 2, got {dim}")));
    }
    let psi = SliceFunction::new(src)?;
    let sum = ordered_disk_sum(grid, CMatrix::zeros(dim, dim), |v| {
        let value = psi.eval(v)?;
        let block = displacement_block(-v, dim);
        check_bessel(&block, -v)?;
        Ok(block * value)
    })?;
    let scale = grid.weight() / (2.0 * std::f64::consts::PI);
    let mut res = ReconstructionResult::new(sum * Complex64::new(scale, 0.0), *grid);
    res.boundary_psi_max = Some(boundary_max(&psi, grid)?);
    Ok(res)
}

fn boundary_max(psi: &SliceFunction<'_>, grid: &DiskGrid) -> Result<f64> {
    let inner = grid.radius - 1.5 * grid.step();
    let mut worst: f64 = 0.0;
    for v in grid.points().into_iter().filter(|v| v.norm() > inner) {
        worst = worst.max(psi.eval(v)?.norm());
    }
    Ok(worst)
}

/// Why a reconstruction was not accepted as a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rejection {
    pub reasons: Vec<String>,
    pub trace: f64,
    pub min_eigenvalue: f64,
    pub hermiticity_defect: f64,
}

/// Accepts the raw operator when it is Hermitian, trace one and positive to
/// within `tol`, then symmetrizes, clips negative eigenvalues and renormalizes.
pub fn validate_as_state(res: &ReconstructionResult, tol: f64) -> std::result::Result<DensityState, Rejection> {
    let mut reasons = Vec::new();
    if !(res.hermiticity_defect <= tol) {
        reasons.push(format!("hermiticity defect {:.3e} exceeds {tol:e}", res.hermiticity_defect));
    }
    if !((res.trace - Complex64::new(1.0, 0.0)).norm() <= tol) {
        reasons.push(format!("trace {:.6} differs from 1 by more than {tol:e}", res.trace));
    }
    if !(res.min_eigenvalue >= -tol) {
        reasons.push(format!("minimum eigenvalue {:.6e} is below -{tol:e}", res.min_eigenvalue));
    }
    if !reasons.is_empty() {
        return Err(Rejection {
            reasons,
            trace: res.trace.re,
            min_eigenvalue: res.min_eigenvalue,
            hermiticity_defect: res.hermiticity_defect,
        });
    }
    project_to_state(res).map_err(|e| Rejection {
        reasons: vec![format!("projected matrix failed validation: {e}")],
        trace: res.trace.re,
        min_eigenvalue: res.min_eigenvalue,
        hermiticity_defect: res.hermiticity_defect,
    })
}

/// Hermitian part with negative eigenvalues set to zero, renormalized to trace one.
pub fn project_to_state(res: &ReconstructionResult) -> Result<DensityState> {
    let (values, vectors) = linalg::hermitian_eigen(&linalg::hermitian_part(&res.rho));
    let clipped: Vec<f64> = values.iter().map(|&l| l.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if !(total > 0.0) {
        return Err(TomoError::InvalidState(vec!["reconstruction has no positive part".into()]));
    }
    let n = res.dim();
    let mut rho = CMatrix::zeros(n, n);
    for (i, &l) in clipped.iter().enumerate() {
        if l > 0.0 {
            let col = vectors.column(i);
            rho += (&col * col.adjoint()) * Complex64::new(l / total, 0.0);
        }
    }
    DensityState::from_matrix(linalg::hermitian_part(&rho))
}

/// `Tr ρ² = (1/2π) ∫ |ψ_f(v)|² dv` on the disk grid.
pub fn purity_from_characteristic(src: &TomogramSource, grid: &DiskGrid) -> Result<f64> {
    let psi = SliceFunction::new(src)?;
    let sum = ordered_disk_sum(grid, 0.0, |v| Ok(psi.eval(v)?.norm_sqr()))?;
    Ok(sum * grid.weight() / (2.0 * std::f64::consts::PI))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PurityMode {
    /// X and Y integrals factorized into `ψ_f(v) ψ_f(−v)`.
    Factorized,
    /// Literal double sum over the X and Y nodes for every `v`.
    Direct,
}

/// `Tr ρ² = (1/2π) ∫ W(X, v) W(Y, −v) e^{i(X+Y)} dX dY dv`.
///
/// The factorized mode is [`purity_from_characteristic`] itself. The direct
/// mode evaluates the inner double sum without factorizing, as a cross-check.
pub fn purity_from_tomogram(src: &TomogramSource, grid: &DiskGrid, mode: PurityMode) -> Result<f64> {
    match mode {
        PurityMode::Factorized => purity_from_characteristic(src, grid),
        PurityMode::Direct => {
            let origin = SliceFunction::new(src)?.origin_value();
            let sum = ordered_disk_sum(grid, 0.0, |v| {
                if v.is_origin() {
                    return Ok((origin * origin).re);
                }
                let a = SliceQuadrature::new(src, v, 1.0)?;
                let b = SliceQuadrature::new(src, -v, 1.0)?;
                let phase = |x: &[f64]| x.iter().map(|&x| Complex64::from_polar(1.0, x)).collect::<Vec<_>>();
                let (ea, eb) = (phase(&a.x), phase(&b.x));
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..a.x.len() {
                    let fx = a.weights[i] * a.values[i];
                    for j in 0..b.x.len() {
                        acc += ea[i] * eb[j] * (fx * b.weights[j] * b.values[j]);
                    }
                }
                Ok(acc.re)
            })?;
            Ok(sum * grid.weight() / (2.0 * std::f64::consts::PI))
        }
    }
}

fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (values, vectors) = linalg::hermitian_eigen(m);
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for (i, &l) in values.iter().enumerate() {
        if l > 0.0 {
            let col = vectors.column(i);
            out += (&col * col.adjoint()) * Complex64::new(l.sqrt(), 0.0);
        }
    }
    out
}

/// Root fidelity `Tr √(√a b √a)`, zero-padding the smaller state.
pub fn state_fidelity(a: &DensityState, b: &DensityState) -> f64 {
    let dim = a.dim().max(b.dim());
    let (a, b) = (a.embedded(dim), b.embedded(dim));
    let root = psd_sqrt(a.matrix());
    let inner = linalg::hermitian_part(&(&root * b.matrix() * &root));
    let (values, _) = linalg::hermitian_eigen(&inner);
    values.iter().map(|&l| l.max(0.0).sqrt()).sum::<f64>().min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{fock_state, make_thermal, random_pure_state, thermal_dim};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid() -> DiskGrid {
        DiskGrid::new(DEFAULT_DISK_RADIUS, DEFAULT_DISK_NODES).unwrap()
    }

    #[test]
    fn vacuum_roundtrip() {
        let res = inverse_radon(&TomogramSource::Vacuum, 32, &grid()).unwrap();
        assert!((res.rho()[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-3);
        for m in 0..32 {
            for n in 0..32 {
                if (m, n) != (0, 0) {
                    assert!(res.rho()[(m, n)].norm() <= 1e-3);
                }
            }
        }
        let state = validate_as_state(&res, 1e-3).unwrap();
        assert!(state_fidelity(&state, &fock_state(0, 2).unwrap()) >= 1.0 - 1e-3);
        let file = res.to_state_file("vacuum");
        assert_eq!(file.metadata.as_ref().unwrap()["nodes"], 128);
    }

    #[test]
    fn random_pure_roundtrip() {
        // |5⟩ components keep |ψ| near 1e-2 at radius 8, so use a disk where
        // ψ has decayed, at the same node spacing.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_pure_state(6, &mut rng);
        let src = TomogramSource::from_state(&rho);
        let wide = inverse_radon(&src, 32, &DiskGrid::new(10.0, 160).unwrap()).unwrap();
        assert!(wide.boundary_psi_max.unwrap() < 1e-4);
        let err = linalg::frobenius_distance(wide.rho(), rho.matrix());
        assert!(err <= 1e-3, "{err}");
        let narrow = inverse_radon(&src, 32, &grid()).unwrap();
        assert!(narrow.boundary_psi_max.unwrap() > 1e-3);
    }

    #[test]
    fn counterexample_is_rejected() {
        let res = inverse_radon(&TomogramSource::Counterexample, 16, &grid()).unwrap();
        assert!(res.min_eigenvalue < -1e-2, "{}", res.min_eigenvalue);
        let rej = validate_as_state(&res, 1e-3).unwrap_err();
        assert!(rej.reasons.iter().any(|r| r.contains("eigenvalue")));
    }

    #[test]
    fn zero_matrix_is_rejected() {
        let res = ReconstructionResult::new(CMatrix::zeros(3, 3), grid());
        let rej = validate_as_state(&res, 1e-6).unwrap_err();
        assert!(rej.reasons.iter().any(|r| r.contains("trace")));
    }

    #[test]
    fn purity_examples() {
        let g = grid();
        let vac = purity_from_characteristic(&TomogramSource::Vacuum, &g).unwrap();
        assert!((vac - 1.0).abs() < 1e-4, "{vac}");
        let thermal = make_thermal(1.0, thermal_dim(1.0)).unwrap();
        let src = TomogramSource::from_state(&thermal);
        let p = purity_from_characteristic(&src, &g).unwrap();
        assert!((p - thermal.purity()).abs() < 1e-3 && (p - 1.0 / 3.0).abs() < 1e-3, "{p}");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pure = random_pure_state(5, &mut rng);
        let p = purity_from_characteristic(&TomogramSource::from_state(&pure), &g).unwrap();
        assert!((p - 1.0).abs() < 1e-3, "{p}");
    }

    #[test]
    fn purity_modes() {
        let g = DiskGrid::new(8.0, 48).unwrap();
        let fact = purity_from_tomogram(&TomogramSource::Vacuum, &g, PurityMode::Factorized).unwrap();
        assert_eq!(fact.to_bits(), purity_from_characteristic(&TomogramSource::Vacuum, &g).unwrap().to_bits());
        let direct = purity_from_tomogram(&TomogramSource::Vacuum, &g, PurityMode::Direct).unwrap();
        assert!((direct - 1.0).abs() < 1e-3 && (direct - fact).abs() < 1e-3, "{direct} {fact}");
    }

    #[test]
    fn fidelity_examples() {
        let vac = fock_state(0, 3).unwrap();
        assert!((state_fidelity(&vac, &vac) - 1.0).abs() < 1e-12);
        assert!(state_fidelity(&vac, &fock_state(1, 2).unwrap()).abs() < 1e-12);
        let thermal = make_thermal(1.0, thermal_dim(1.0)).unwrap();
        assert!((state_fidelity(&vac, &thermal) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
        assert!((state_fidelity(&thermal, &thermal) - 1.0).abs() < 1e-10);
    }
}
