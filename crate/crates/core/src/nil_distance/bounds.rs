use super::witness::NilWitness;
use crate::error::Result;
use crate::linalg::{eigvalsh, schur_form, CertifiedNilpotent, ComplexMatrix, SchurForm, DEFAULT_MERGE_TOL};
use serde::Serialize;

/// Lower bounds on the distance to the nilpotent matrices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LowerBounds {
    /// Half the largest gap in the sorted spectrum with 0 adjoined; 0 unless
    /// the input is positive semidefinite.
    pub gap_lower: f64,
    /// `|tr M| / dim`
    pub trace_lower: f64,
    pub positive_semidefinite: bool,
    /// 0 is an eigenvalue within the merge tolerance, so the gap bound is
    /// backed by the non-invertible hypothesis.
    pub zero_in_spectrum: bool,
}

impl LowerBounds {
    pub fn best(&self) -> f64 {
        self.gap_lower.max(self.trace_lower)
    }
}

/// Relative tolerance for treating an input as Hermitian positive semidefinite.
const PSD_TOL: f64 = 1e-12;

pub fn lower_bounds(m: &ComplexMatrix) -> Result<LowerBounds> {
    let n = m.dim();
    let trace_lower = m.trace().norm() / n as f64;
    let scale = 1.0 + m.max_abs();
    let mut out = LowerBounds { gap_lower: 0.0, trace_lower, positive_semidefinite: false, zero_in_spectrum: false };
    if m.hermitian_defect() > PSD_TOL * scale {
        return Ok(out);
    }
    let herm = ComplexMatrix::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let values = eigvalsh(&herm)?;
    if values[0] < -DEFAULT_MERGE_TOL * scale {
        return Ok(out);
    }
    out.positive_semidefinite = true;
    out.zero_in_spectrum = values[0].abs() <= DEFAULT_MERGE_TOL * scale;
    out.gap_lower = 0.5 * max_gap_with_zero(&values);
    Ok(out)
}

/// Largest gap between consecutive points of `values ∪ {0}` (sorted input).
pub fn max_gap_with_zero(values: &[f64]) -> f64 {
    let mut pts: Vec<f64> = values.to_vec();
    pts.push(0.0);
    pts.sort_by(f64::total_cmp);
    pts.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

/// Nilpotent obtained by deleting the diagonal of the Schur core.
pub fn upper_schur(m: &ComplexMatrix) -> Result<NilWitness> {
    let form = schur_form(m)?;
    let nilpotent = CertifiedNilpotent::new(SchurForm { core: form.core.strict_upper(), basis: form.basis })?;
    NilWitness::against(m, nilpotent)
}
