//! Resolving `--source` / `--reference` strings.

use std::fs::File;
use std::path::Path;

use symtomo::fock::{fock_state, make_thermal, thermal_dim};
use symtomo::tomogram::{TabulatedTomogram, TomogramSource};
use symtomo::{DensityState, Result, TomoError};

fn bad(msg: String) -> TomoError {
    TomoError::InvalidInput(msg)
}

fn builtin_state(spec: &str) -> Option<Result<DensityState>> {
    let rest = spec.strip_prefix("builtin:")?;
    let mut parts = rest.splitn(2, ':');
    let name = parts.next().unwrap_or_default();
    let arg = parts.next();
    Some(match (name, arg) {
        ("vacuum", None) => fock_state(0, 2),
        ("fock", Some(n)) => n
            .parse::<usize>()
            .map_err(|_| bad(format!("builtin:fock needs a photon number, got '{n}'")))
            .and_then(|n| fock_state(n, n + 2)),
        ("thermal", Some(x)) => x
            .parse::<f64>()
            .map_err(|_| bad(format!("builtin:thermal needs a mean photon number, got '{x}'")))
            .and_then(|nbar| make_thermal(nbar, thermal_dim(nbar.max(0.0)))),
        _ => Err(bad(format!("unknown builtin source '{spec}'"))),
    })
}

/// `builtin:vacuum`, `builtin:counterexample`, `builtin:fock:N`,
/// `builtin:thermal:NBAR`, a `.csv` table with columns `X,mu,nu,W`, or a JSON
/// state file.
pub fn load_source(spec: &str) -> Result<TomogramSource> {
    match spec {
        "builtin:vacuum" => return Ok(TomogramSource::Vacuum),
        "builtin:counterexample" => return Ok(TomogramSource::Counterexample),
        _ => {}
    }
    if let Some(state) = builtin_state(spec) {
        return Ok(TomogramSource::from_state(&state?));
    }
    let path = Path::new(spec);
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        return Ok(TomogramSource::Tabulated(TabulatedTomogram::from_csv(File::open(path)?)?));
    }
    Ok(TomogramSource::from_state(&DensityState::load(path)?))
}

/// A density state: builtin states or a JSON state file.
pub fn load_state(spec: &str) -> Result<DensityState> {
    if spec == "builtin:counterexample" {
        return Err(bad("builtin:counterexample is not a density state".into()));
    }
    if let Some(state) = builtin_state(spec) {
        return state;
    }
    DensityState::load(spec)
}

/// State behind a source, if it has one.
pub fn source_state(src: &TomogramSource) -> Option<DensityState> {
    match src {
        TomogramSource::Vacuum => fock_state(0, 2).ok(),
        _ => src.state().cloned(),
    }
}
