//! On-disk memo of 1D eigenvalue lists, enabled by `QUASILAB_CACHE_DIR`.
//!
//! Files are the CSV form of an `EmpiricalMeasure`, named after
//! `(s, a, N, window, convention version)`.

use std::path::PathBuf;

use quasilab::jacobi1d::{self, HoppingWindow, ModelParams, WindowSource, CONVENTION_VERSION};
use quasilab::{EmpiricalMeasure, Result};

pub const ENV_VAR: &str = "QUASILAB_CACHE_DIR";

fn key(p: ModelParams, n: usize, source: WindowSource) -> String {
    let src = match source {
        WindowSource::Substitution { offset: 0 } => String::new(),
        WindowSource::Substitution { offset } => format!("_off{offset}"),
        WindowSource::Rotation { beta } => format!("_rot{:016x}", beta.to_bits()),
    };
    format!(
        "eig_s{}_a{:016x}_N{}{}_v{}.csv",
        p.s,
        p.a.to_bits(),
        n,
        src,
        CONVENTION_VERSION
    )
}

fn dir() -> Option<PathBuf> {
    std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// Eigenvalues of the window, read from or stored in the cache when enabled.
pub fn eigenvalues(p: ModelParams, n: usize, source: WindowSource) -> Result<EmpiricalMeasure> {
    let compute = |w: &HoppingWindow| jacobi1d::eigenvalues(w, jacobi1d::DEFAULT_TOL);
    let Some(dir) = dir() else {
        return compute(&jacobi1d::build_window(p, n, source)?);
    };
    let path = dir.join(key(p, n, source));
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(m) = EmpiricalMeasure::from_csv(&text) {
            if m.len() == n {
                return Ok(m);
            }
        }
    }
    let m = compute(&jacobi1d::build_window(p, n, source)?)?;
    std::fs::create_dir_all(&dir)?;
    // Write then rename so concurrent readers never see a partial file.
    let tmp = dir.join(format!("{}.{}.tmp", key(p, n, source), std::process::id()));
    std::fs::write(&tmp, m.to_csv())?;
    std::fs::rename(&tmp, &path)?;
    Ok(m)
}
