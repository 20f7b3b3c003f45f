//! Brackets and estimates for the distance from a matrix to the nilpotent matrices.

mod bounds;
mod estimate;
mod oracle;
mod persistence;
mod witness;

pub use bounds::{lower_bounds, max_gap_with_zero, upper_schur, LowerBounds};
pub use estimate::{estimate, Estimate, EstimateConfig};
pub use oracle::{largest_singular_value, oracle_small, OracleConfig, MAX_ORACLE_DIM};
pub use persistence::spectral_persistence;
pub use witness::NilWitness;

use crate::error::Result;
use crate::linalg::ComplexMatrix;
use serde::Serialize;

/// Lower and upper bounds on the distance to the nilpotent matrices.
#[derive(Clone, Debug)]
pub struct BoundsReport {
    pub lower: LowerBounds,
    pub schur_upper: f64,
    pub estimate_upper: f64,
    pub witness: NilWitness,
    pub below_lower_bound: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BracketSummary {
    pub gap_lower: f64,
    pub trace_lower: f64,
    pub schur_upper: f64,
    pub estimate: f64,
}

impl BoundsReport {
    pub fn lower(&self) -> f64 {
        self.lower.best()
    }

    pub fn upper(&self) -> f64 {
        self.schur_upper.min(self.estimate_upper)
    }

    /// Lower bound does not exceed the upper bound by more than 1e−6.
    pub fn is_consistent(&self) -> bool {
        self.lower() <= self.upper() + 1e-6
    }

    pub fn summary(&self) -> BracketSummary {
        BracketSummary {
            gap_lower: self.lower.gap_lower,
            trace_lower: self.lower.trace_lower,
            schur_upper: self.schur_upper,
            estimate: self.estimate_upper,
        }
    }
}

pub fn bracket(m: &ComplexMatrix, cfg: &EstimateConfig) -> Result<BoundsReport> {
    let lower = lower_bounds(m)?;
    let schur = upper_schur(m)?;
    let est = estimate(m, cfg)?;
    Ok(BoundsReport {
        lower,
        schur_upper: schur.defect(),
        estimate_upper: est.value,
        witness: est.witness,
        below_lower_bound: est.below_lower_bound,
    })
}
