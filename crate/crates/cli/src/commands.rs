use serde::Serialize;
use serde_json::{json, Value};
use symtomo::positivity::{
    certify, search_min_eigenvalue, CertificationReport, CertifyConfig, GramKind, GramSearch, SliceFunction, Verdict,
    NONNEGATIVITY_FAIL_TOL, NORMALIZATION_FAIL_TOL,
};
use symtomo::quadrature::DiskGrid;
use symtomo::reconstruction::{
    inverse_radon, purity_from_characteristic, purity_from_tomogram, state_fidelity, validate_as_state, PurityMode,
};
use symtomo::tomogram::{
    check_homogeneity, check_nonnegativity, check_normalization, second_moment_p, second_moment_q, GridSpec,
    HomogeneitySample, TomogramSource,
};
use symtomo::{PhasePoint, Result, StateFile};

use crate::source::{load_state, source_state};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit status for a finished run.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

pub struct Output {
    pub report: Value,
    pub csv: Option<String>,
    pub exit: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct RaySummary {
    pub ray: PhasePoint,
    pub normalization: f64,
    pub min_value: f64,
    pub argmin: f64,
    pub negative: bool,
    pub normalization_defect: bool,
}

pub fn tomogram(src: &TomogramSource, grid: &GridSpec) -> Result<Output> {
    let xs = grid.points();
    let mut csv = String::from("X,mu,nu,W\n");
    let mut rays = Vec::new();
    let mut summaries = Vec::new();
    for &v in &grid.rays {
        let w = xs.iter().map(|&x| src.evaluate(x, v)).collect::<Result<Vec<f64>>>()?;
        for (x, w) in xs.iter().zip(&w) {
            csv.push_str(&format!("{x},{},{},{w:e}\n", v.mu, v.nu));
        }
        let normalization = check_normalization(src, v, grid)?;
        let scan = check_nonnegativity(src, v, grid)?;
        summaries.push(RaySummary {
            ray: v,
            normalization,
            min_value: scan.min_value,
            argmin: scan.argmin,
            negative: scan.min_value < -NONNEGATIVITY_FAIL_TOL,
            normalization_defect: (normalization - 1.0).abs() > NORMALIZATION_FAIL_TOL,
        });
        rays.push(json!({ "ray": v, "x": xs, "w": w }));
    }
    let violation = summaries.iter().any(|s| s.negative || s.normalization_defect);
    Ok(Output {
        report: json!({
            "source": src.describe(),
            "source_kind": src.kind(),
            "summary": summaries,
            "violation": violation,
            "rays": rays,
        }),
        csv: Some(csv),
        exit: if violation { EXIT_VIOLATION } else { EXIT_OK },
    })
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => EXIT_OK,
        Verdict::Fail => EXIT_VIOLATION,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

pub fn certify_cmd(src: &TomogramSource, cfg: &CertifyConfig) -> Result<Output> {
    let report = certify(src, cfg)?;
    Ok(Output { exit: verdict_exit(report.verdict), report: serde_json::to_value(&report)?, csv: None })
}

pub fn reconstruct(
    src: &TomogramSource,
    dim: usize,
    disk: &DiskGrid,
    tol: f64,
    reference: Option<&str>,
) -> Result<(Output, Option<StateFile>)> {
    let res = inverse_radon(src, dim, disk)?;
    let reference = match reference {
        Some(spec) => Some(load_state(spec)?),
        None => source_state(src),
    };
    let validated = validate_as_state(&res, tol);
    let (accepted, rejection, state, fidelity) = match &validated {
        Ok(state) => (true, None, Some(state.to_file()), reference.as_ref().map(|r| state_fidelity(state, r))),
        Err(rej) => (false, Some(rej.clone()), None, None),
    };
    let mut warnings = Vec::new();
    if let Some(edge) = res.boundary_psi_max.filter(|&e| e > 1e-8) {
        warnings.push(format!(
            "|psi| reaches {edge:.2e} on the edge of the disk; a larger --disk-radius may be needed"
        ));
    }
    let report = json!({
        "source": src.describe(),
        "source_kind": src.kind(),
        "dim": dim,
        "diagnostics": {
            "trace_re": res.trace.re,
            "trace_im": res.trace.im,
            "min_eigenvalue": res.min_eigenvalue,
            "hermiticity_defect": res.hermiticity_defect,
            "boundary_psi_max": res.boundary_psi_max,
        },
        "warnings": warnings,
        "accepted": accepted,
        "rejection": rejection,
        "fidelity": fidelity,
        "raw": res.to_state_file(&src.describe()),
        "state": state,
    });
    let exit = if accepted { EXIT_OK } else { EXIT_VIOLATION };
    Ok((Output { report, csv: None, exit }, validated.ok().map(|s| s.to_file())))
}

pub fn purity(src: &TomogramSource, disk: &DiskGrid) -> Result<Output> {
    let characteristic = purity_from_characteristic(src, disk)?;
    let direct = purity_from_tomogram(src, disk, PurityMode::Direct)?;
    let truth = source_state(src).map(|s| s.purity());
    let in_range = |p: f64| p > 0.0 && p <= 1.0 + 1e-3;
    let violation = !in_range(characteristic) || !in_range(direct);
    Ok(Output {
        report: json!({
            "source": src.describe(),
            "source_kind": src.kind(),
            "purity_characteristic": characteristic,
            "purity_direct": direct,
            "mode_difference": (characteristic - direct).abs(),
            "ground_truth": truth,
            "violation": violation,
        }),
        csv: None,
        exit: if violation { EXIT_VIOLATION } else { EXIT_OK },
    })
}

fn search(kind: GramKind, src: &TomogramSource, cfg: &CertifyConfig) -> Result<GramSearch> {
    let slice = SliceFunction::new(src)?;
    search_min_eigenvalue(kind, |v| slice.eval(v), &cfg.search())
}

fn kind_summary(s: &GramSearch, cfg: &CertifyConfig) -> Value {
    json!({
        "kind": s.kind,
        "min_eigenvalue": s.min_eigenvalue,
        "witness_trial": s.witness_trial,
        "pass": s.min_eigenvalue >= cfg.threshold(),
    })
}

pub fn demo_counterexample(cfg: &CertifyConfig) -> Result<Output> {
    let src = TomogramSource::Counterexample;
    let quad = GridSpec::symmetric(40.0, 801)?;
    let p2 = second_moment_p(&src, &quad)?;
    let q2 = second_moment_q(&src, &quad)?;
    let norm = check_normalization(&src, PhasePoint::new(0.0, 1.0), &quad)?;
    let samples: Vec<HomogeneitySample> = [(1.3, 0.4, 0.7, 2.5), (-0.8, 1.0, -1.2, -0.5), (2.0, -0.3, 0.9, 3.0)]
        .iter()
        .map(|&(x, mu, nu, lambda)| HomogeneitySample { x, ray: PhasePoint::new(mu, nu), lambda })
        .collect();
    let homogeneity = check_homogeneity(&src, &samples)?;
    let report: CertificationReport = certify(&src, cfg)?;
    let recon = inverse_radon(&src, 16, &DiskGrid::new(8.0, 128)?)?;
    let failed = report.verdict == Verdict::Fail || recon.min_eigenvalue < -1e-3;
    Ok(Output {
        report: json!({
            "demo": "counterexample",
            "function": "f(X, mu, nu) = exp(-X^2 / (2 s^2)) (5 s^2 - X^2) / sqrt(2 s^6), s^2 = mu^2 + nu^2",
            "moments": {
                "normalization": norm,
                "p2": p2,
                "q2": q2,
                "quoted_p2": -0.5,
                "note": "the integrals are computed from f exactly as written; it integrates to 4 sqrt(pi) rather than 1, and its second moments are positive",
            },
            "homogeneity_deviation": homogeneity,
            "certification": report,
            "reconstruction": {
                "dim": 16,
                "trace": recon.trace.re,
                "min_eigenvalue": recon.min_eigenvalue,
            },
            "failed_criteria": failed,
        }),
        csv: None,
        exit: if failed { EXIT_VIOLATION } else { EXIT_OK },
    })
}

pub fn demo_vacuum(cfg: &CertifyConfig) -> Result<Output> {
    let src = TomogramSource::Vacuum;
    let kinds = [GramKind::WhGroup, GramKind::OmegaTwisted, GramKind::Classical]
        .into_iter()
        .map(|k| search(k, &src, cfg))
        .collect::<Result<Vec<_>>>()?;
    let report = certify(&src, cfg)?;
    let all_pass = kinds.iter().all(|s| s.min_eigenvalue >= cfg.threshold()) && report.verdict == Verdict::Pass;
    Ok(Output {
        report: json!({
            "demo": "vacuum",
            "positivity": kinds.iter().map(|s| kind_summary(s, cfg)).collect::<Vec<_>>(),
            "certification": report,
            "all_pass": all_pass,
        }),
        csv: None,
        exit: if all_pass { EXIT_OK } else { EXIT_VIOLATION },
    })
}
