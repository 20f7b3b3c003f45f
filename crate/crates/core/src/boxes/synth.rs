use super::fit::{fit_path_poly, PathFit, DEFAULT_MAX_DEGREE};
use super::grid::{BoxSet, GridBox};
use super::plan::{plan, validate_plan, Plan, PlanStep};
use crate::error::{Error, Result};
use crate::kahan::build_kahan;
use crate::linalg::{op_norm, CertifiedNilpotent, ComplexMatrix, RealMatrix, Spectrum, DEFAULT_MERGE_TOL};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use std::sync::Arc;

pub const MIN_ORDER: usize = 16;

/// Kahan data shared by every block: eigenpairs of `A_ℓ` and powers of the
/// nilpotent witness core.
#[derive(Debug)]
struct SynthBasis {
    a_values: Vec<f64>,
    vectors: RealMatrix,
    witness_powers: Vec<RealMatrix>,
}

impl SynthBasis {
    fn dim(&self) -> usize {
        self.a_values.len()
    }

    /// `V diag(values) Vᵀ`.
    fn diagonalized(&self, values: &[Complex64]) -> ComplexMatrix {
        let v = &self.vectors;
        let vt = v.transpose();
        let part = |f: &dyn Fn(Complex64) -> f64| {
            let scaled = RealMatrix::from_fn(self.dim(), |i, j| v[(i, j)] * f(values[j]));
            &scaled * &vt
        };
        let (re, im) = (part(&|z| z.re), part(&|z| z.im));
        ComplexMatrix::from_fn(self.dim(), |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
    }

    /// `p(W)` for the witness core `W`.
    fn witness_poly(&self, fit: &PathFit) -> ComplexMatrix {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (d, &c) in fit.poly.coeffs().iter().enumerate().skip(1) {
            if c == Complex64::default() {
                continue;
            }
            let w = &self.witness_powers[d - 1];
            for (o, &x) in out.as_mut_slice().iter_mut().zip(w.as_slice()) {
                *o += c * x;
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairBlock {
    pub step: PlanStep,
    pub fit: PathFit,
    /// Eigenvalues of the normal block: `p(λ)` for each eigenvalue `λ` of `A_ℓ`,
    /// moved to the nearest box center present at this step.
    pub snapped: Vec<Complex64>,
    /// `max |p(λ) − snapped|`, equal to the norm of the snapping perturbation.
    pub snap_displacement: f64,
    pub defect: f64,
}

/// Normal/nilpotent pair assembled block by block along a peeling plan.
#[derive(Clone, Debug)]
pub struct PairWitness {
    target: BoxSet,
    ell: usize,
    plan: Plan,
    blocks: Vec<PairBlock>,
    defect: f64,
    basis: Arc<SynthBasis>,
}

impl PairWitness {
    pub fn target(&self) -> &BoxSet {
        &self.target
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn plan(&self) -> &Plan {
        &self.plan
    }

    pub fn blocks(&self) -> &[PairBlock] {
        &self.blocks
    }

    /// Largest block defect, which is the defect of the direct sum.
    pub fn defect(&self) -> f64 {
        self.defect
    }

    pub fn per_block_defect(&self) -> Vec<f64> {
        self.blocks.iter().map(|b| b.defect).collect()
    }

    pub fn dim(&self) -> usize {
        self.blocks.len() * self.ell
    }

    /// Exact spectrum of `N` (the snapped centers with multiplicities).
    pub fn spectrum(&self) -> Spectrum {
        let all: Vec<Complex64> = self.blocks.iter().flat_map(|b| b.snapped.iter().copied()).collect();
        Spectrum::from_values(&all, DEFAULT_MERGE_TOL)
    }

    pub fn block_normal(&self, k: usize) -> ComplexMatrix {
        self.basis.diagonalized(&self.blocks[k].snapped)
    }

    /// `p(A_ℓ)` before snapping.
    pub fn block_unsnapped(&self, k: usize) -> ComplexMatrix {
        let p = &self.blocks[k].fit.poly;
        let values: Vec<Complex64> = self.basis.a_values.iter().map(|&l| p.eval_real(l)).collect();
        self.basis.diagonalized(&values)
    }

    pub fn block_nilpotent(&self, k: usize) -> Result<CertifiedNilpotent> {
        CertifiedNilpotent::from_core(self.basis.witness_poly(&self.blocks[k].fit))
    }

    pub fn normal(&self) -> Result<ComplexMatrix> {
        let blocks: Vec<ComplexMatrix> = (0..self.blocks.len()).map(|k| self.block_normal(k)).collect();
        ComplexMatrix::direct_sum(&blocks.iter().collect::<Vec<_>>())
    }

    pub fn nilpotent(&self) -> Result<CertifiedNilpotent> {
        let blocks = (0..self.blocks.len()).map(|k| self.block_nilpotent(k)).collect::<Result<Vec<_>>>()?;
        CertifiedNilpotent::direct_sum(&blocks.iter().collect::<Vec<_>>())
    }
}

fn nearest_center(z: Complex64, boxes: &BTreeSet<GridBox>, eps: f64) -> Complex64 {
    let mut best = (f64::INFINITY, Complex64::default());
    for b in boxes {
        let c = b.center(eps);
        let d = (z - c).norm();
        if d < best.0 {
            best = (d, c);
        }
    }
    best.1
}

/// One block per plan step: the normal block is `p(A_ℓ)` with eigenvalues
/// snapped to box centers, the nilpotent block is `p` of the Kahan witness.
pub fn synth_pair(bs: &BoxSet, ell: usize) -> Result<PairWitness> {
    if ell < MIN_ORDER {
        return Err(Error::InvalidArgument(format!("Kahan order must be at least {MIN_ORDER}, got {ell}")));
    }
    let eps = bs.eps();
    let peel = plan(bs);
    validate_plan(bs, &peel)?;
    let mut steps = peel.steps.clone();
    let mut stages = peel.stages(bs);
    if steps.is_empty() {
        steps.push(PlanStep { removed: GridBox::ORIGIN, path: vec![GridBox::ORIGIN] });
        stages.push(bs.boxes().clone());
    }
    let fits = steps.iter().map(|s| fit_path_poly(&s.path, eps, DEFAULT_MAX_DEGREE)).collect::<Result<Vec<_>>>()?;

    let pack = build_kahan(ell)?;
    let eig = pack.h_eigen()?;
    let h2 = pack.norms.h * pack.norms.h;
    let a_values: Vec<f64> = eig.values.iter().map(|&l| l * l / h2).collect();
    let max_degree = fits.iter().map(|f| f.poly.degree()).max().unwrap_or(0);
    let w = pack.witness_core_real();
    let mut witness_powers: Vec<RealMatrix> = Vec::with_capacity(max_degree);
    for d in 0..max_degree {
        let next = if d == 0 { w.clone() } else { &witness_powers[d - 1] * &w };
        witness_powers.push(next);
    }
    let basis = Arc::new(SynthBasis { a_values, vectors: eig.vectors.expect("vectors requested"), witness_powers });

    let blocks = steps
        .into_par_iter()
        .zip(fits)
        .zip(stages)
        .enumerate()
        .map(|(k, ((step, fit), present))| {
            let raw: Vec<Complex64> = basis.a_values.iter().map(|&l| fit.poly.eval_real(l)).collect();
            let snapped: Vec<Complex64> = raw.iter().map(|&z| nearest_center(z, &present, eps)).collect();
            let required = step.removed.center(eps);
            if !snapped.contains(&required) {
                return Err(Error::MissingBox { block: k, re: step.removed.0, im: step.removed.1 });
            }
            let snap_displacement = raw.iter().zip(&snapped).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            let normal = basis.diagonalized(&snapped);
            let defect = op_norm(&(&normal - &basis.witness_poly(&fit)));
            Ok(PairBlock { step, fit, snapped, snap_displacement, defect })
        })
        .collect::<Result<Vec<_>>>()?;
    let defect = blocks.iter().map(|b| b.defect).fold(0.0, f64::max);
    Ok(PairWitness { target: bs.clone(), ell, plan: peel, blocks, defect, basis })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_only_is_zero_pair() {
        let bs = BoxSet::new(1.0, []).unwrap();
        let pair = synth_pair(&bs, 16).unwrap();
        assert_eq!(pair.defect(), 0.0);
        assert_eq!(pair.normal().unwrap().max_abs(), 0.0);
        assert_eq!(pair.nilpotent().unwrap().materialized().max_abs(), 0.0);
    }

    #[test]
    fn segment_covers_both_centers() {
        let bs = BoxSet::new(1.0, [GridBox(1, 0)]).unwrap();
        let pair = synth_pair(&bs, 64).unwrap();
        let spec = pair.spectrum();
        assert!(spec.contains(Complex64::new(0.0, 0.0), 1e-12));
        assert!(spec.contains(Complex64::new(1.0, 0.0), 1e-12));
        assert_eq!(spec.points().len(), 2);
        let snap = op_norm(&(&pair.block_normal(0) - &pair.block_unsnapped(0)));
        assert!((snap - pair.blocks()[0].snap_displacement).abs() < 1e-9);
    }

    #[test]
    fn rejects_small_order() {
        let bs = BoxSet::new(1.0, []).unwrap();
        assert!(synth_pair(&bs, 8).is_err());
    }
}
