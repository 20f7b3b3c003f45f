//! File formats: `.cmat` matrices, spectrum lists and small argument grammars.

use crate::error::{CliError, CliResult};
use nilprox_core::linalg::{parse_cmat, write_cmat, Spectrum};
use nilprox_core::{Complex64, ComplexMatrix};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let io_err = |source| CliError::Io { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn read_cmat(path: &Path) -> CliResult<ComplexMatrix> {
    parse_cmat(&read_text(path)?).map_err(|source| CliError::Input { path: path.to_path_buf(), source })
}

pub fn write_cmat_file(path: &Path, m: &ComplexMatrix) -> CliResult<()> {
    write_atomic(path, write_cmat(m).as_bytes())
}

/// Spectrum JSON: a list of `[re, im, multiplicity]`.
pub fn read_spectrum(path: &Path) -> CliResult<Spectrum> {
    let triples: Vec<(f64, f64, usize)> = serde_json::from_str(&read_text(path)?)
        .map_err(|source| CliError::Json { path: path.to_path_buf(), source })?;
    if triples.is_empty() {
        return Err(CliError::Validation(format!("{}: spectrum is empty", path.display())));
    }
    if let Some(t) = triples.iter().find(|t| !t.0.is_finite() || !t.1.is_finite() || t.2 == 0) {
        return Err(CliError::Validation(format!("{}: bad spectrum entry {t:?}", path.display())));
    }
    Ok(Spectrum::from_points(triples.into_iter().map(|(re, im, m)| (Complex64::new(re, im), m))))
}

/// Grid spec `re_min,re_max,im_min,im_max,n`: an `n × n` lattice including the corners.
pub fn parse_grid(spec: &str) -> CliResult<Vec<Complex64>> {
    let bad = || CliError::Validation(format!("grid {spec:?} is not re_min,re_max,im_min,im_max,n"));
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(bad());
    }
    let bounds: Vec<f64> = parts[..4].iter().map(|s| s.parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    let n: usize = parts[4].parse().map_err(|_| bad())?;
    if n == 0 || bounds.iter().any(|b| !b.is_finite()) || bounds[0] > bounds[1] || bounds[2] > bounds[3] {
        return Err(bad());
    }
    let at = |lo: f64, hi: f64, k: usize| if n == 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 };
    Ok((0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| Complex64::new(at(bounds[0], bounds[1], i), at(bounds[2], bounds[3], j)))
        .collect())
}

/// Comma-separated list of positive reals.
pub fn parse_reals(spec: &str) -> CliResult<Vec<f64>> {
    spec.split(',')
        .map(|s| match s.trim().parse::<f64>() {
            Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
            _ => Err(CliError::Validation(format!("{s:?} is not a positive number"))),
        })
        .collect()
}

/// Path next to `report` with the given suffix, e.g. `run.json` → `run_witness.cmat`.
pub fn sibling(report: &Path, suffix: &str) -> PathBuf {
    let stem = report.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    report.with_file_name(format!("{stem}_{suffix}"))
}
