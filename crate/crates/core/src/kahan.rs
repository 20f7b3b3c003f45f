//! Log-weighted Jordan-block constructions with certified norm inequalities.
//!
//! With `q` the n×n nilpotent shift, `Q′ = Σ_{j<n} qʲ/j`, `Q = Q′/ln n`,
//! `H = (Q + Qᴴ)/2`, `B = H/‖H‖` and `A = B²`. Every matrix here is real
//! upper or symmetric Toeplitz, so norms are computed matrix-free and only `H`
//! is ever stored densely (for its eigendecomposition).

use crate::error::{Error, Result};
use crate::linalg::norm::{operator_norm, LinearOperator};
use crate::linalg::scalar::axpy;
use crate::linalg::{eigh, eigvalsh, CertifiedNilpotent, ComplexMatrix, HermitianEigen, RealMatrix};
use crate::nil_distance::NilWitness;
use serde::Serialize;
use std::f64::consts::{LN_2, PI};

/// Slack added to every certified inequality.
pub const CHECK_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KahanNorms {
    /// `‖(Q′ − Q′ᴴ)/2‖`, the skew-Hermitian part of `Q′`.
    pub skew_q_prime: f64,
    pub h: f64,
    pub h_minus_q: f64,
    pub a: f64,
}

/// Right-hand sides of the four inequalities at this order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KahanBounds {
    pub skew_q_prime: f64,
    pub h_norm_deviation: f64,
    pub h_minus_q: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KahanChecks {
    /// `‖skew(Q′)‖ ≤ π/2`
    pub skew_bounded: bool,
    /// `|‖H‖ − 1| ≤ ln 2 / (2 ln n)`
    pub h_norm_near_one: bool,
    /// `‖H − Q‖ ≤ π / (2 ln n)`
    pub h_close_to_q: bool,
    /// `−I ≤ H ≤ I`
    pub h_contraction: bool,
}

impl KahanChecks {
    pub fn as_array(&self) -> [bool; 4] {
        [self.skew_bounded, self.h_norm_near_one, self.h_close_to_q, self.h_contraction]
    }

    pub fn all(&self) -> bool {
        self.as_array().iter().all(|&b| b)
    }
}

#[derive(Clone, Debug)]
pub struct KahanPack {
    n: usize,
    log_n: f64,
    pub norms: KahanNorms,
    pub bounds: KahanBounds,
    pub checks: KahanChecks,
    /// `|‖H‖ − 1|`
    pub h_norm_deviation: f64,
    h_eigenvalues: Vec<f64>,
}

/// Coefficients `c_j = 1/j` of `Q′` along its `j`-th superdiagonal (`c_0 = 0`).
pub fn jordan_weights(n: usize) -> Vec<f64> {
    (0..n).map(|j| if j == 0 { 0.0 } else { 1.0 / j as f64 }).collect()
}

/// Upper triangular Toeplitz operator `Σ_j c_j qʲ`.
#[derive(Clone, Debug)]
pub struct UpperToeplitz {
    coeffs: Vec<f64>,
}

impl UpperToeplitz {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    fn forward(&self, x: &[f64], y: &mut [f64]) {
        let n = x.len();
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.coeffs[1..n - i].iter().zip(&x[i + 1..]).map(|(c, v)| c * v).sum();
        }
    }

    fn backward(&self, x: &[f64], y: &mut [f64]) {
        let n = x.len();
        y.iter_mut().for_each(|v| *v = 0.0);
        for (k, &xk) in x.iter().enumerate() {
            if xk != 0.0 {
                axpy(xk, &self.coeffs[1..n - k], &mut y[k + 1..]);
            }
        }
    }

    /// Dense matrix, filled by index shifting.
    pub fn to_dense(&self, scale: f64) -> RealMatrix {
        let n = self.coeffs.len();
        RealMatrix::from_fn(n, |i, j| if j > i { self.coeffs[j - i] * scale } else { 0.0 })
    }
}

impl LinearOperator<f64> for UpperToeplitz {
    fn dim(&self) -> usize {
        self.coeffs.len()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.forward(x, y)
    }
    fn apply_adjoint(&self, x: &[f64], y: &mut [f64]) {
        self.backward(x, y)
    }
}

/// `scale · (U − Uᵀ) / 2`
struct SkewPart<'a> {
    u: &'a UpperToeplitz,
    scale: f64,
}

impl LinearOperator<f64> for SkewPart<'_> {
    fn dim(&self) -> usize {
        self.u.dim()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut t = vec![0.0; x.len()];
        self.u.forward(x, y);
        self.u.backward(x, &mut t);
        let s = 0.5 * self.scale;
        y.iter_mut().zip(&t).for_each(|(a, b)| *a = s * (*a - b));
    }
    fn apply_adjoint(&self, x: &[f64], y: &mut [f64]) {
        self.apply(x, y);
        y.iter_mut().for_each(|v| *v = -*v);
    }
}

/// `B² − W` with `B = h·(U + Uᵀ)` and `W = (w·U)²`.
struct WitnessResidual<'a> {
    u: &'a UpperToeplitz,
    b_scale: f64,
    w_scale: f64,
}

impl WitnessResidual<'_> {
    fn sym(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let (mut y, mut t) = (vec![0.0; n], vec![0.0; n]);
        self.u.forward(x, &mut y);
        self.u.backward(x, &mut t);
        y.iter_mut().zip(&t).for_each(|(a, b)| *a = self.b_scale * (*a + b));
        y
    }
}

impl LinearOperator<f64> for WitnessResidual<'_> {
    fn dim(&self) -> usize {
        self.u.dim()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = x.len();
        let b2 = self.sym(&self.sym(x));
        let (mut t1, mut t2) = (vec![0.0; n], vec![0.0; n]);
        self.u.forward(x, &mut t1);
        self.u.forward(&t1, &mut t2);
        let w2 = self.w_scale * self.w_scale;
        for i in 0..n {
            y[i] = b2[i] - w2 * t2[i];
        }
    }
    fn apply_adjoint(&self, x: &[f64], y: &mut [f64]) {
        let n = x.len();
        let b2 = self.sym(&self.sym(x));
        let (mut t1, mut t2) = (vec![0.0; n], vec![0.0; n]);
        self.u.backward(x, &mut t1);
        self.u.backward(&t1, &mut t2);
        let w2 = self.w_scale * self.w_scale;
        for i in 0..n {
            y[i] = b2[i] - w2 * t2[i];
        }
    }
}

pub fn build_kahan(n: usize) -> Result<KahanPack> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("Kahan order must be at least 2, got {n}")));
    }
    let log_n = (n as f64).ln();
    let u = UpperToeplitz::new(jordan_weights(n));
    let h_eigenvalues = eigvalsh(&hermitian_part(&u, log_n))?;
    let h = h_eigenvalues[0].abs().max(h_eigenvalues[n - 1].abs());
    let skew_q_prime = operator_norm(&SkewPart { u: &u, scale: 1.0 }).value;
    let h_minus_q = operator_norm(&SkewPart { u: &u, scale: 1.0 / log_n }).value;
    let a = h_eigenvalues.iter().map(|&l| l * l / (h * h)).fold(0.0, f64::max);

    let bounds =
        KahanBounds { skew_q_prime: PI / 2.0, h_norm_deviation: LN_2 / (2.0 * log_n), h_minus_q: PI / (2.0 * log_n) };
    let h_norm_deviation = (h - 1.0).abs();
    let checks = KahanChecks {
        skew_bounded: skew_q_prime <= bounds.skew_q_prime + CHECK_SLACK,
        h_norm_near_one: h_norm_deviation <= bounds.h_norm_deviation + CHECK_SLACK,
        h_close_to_q: h_minus_q <= bounds.h_minus_q + CHECK_SLACK,
        h_contraction: h_eigenvalues[0] >= -1.0 - CHECK_SLACK && h_eigenvalues[n - 1] <= 1.0 + CHECK_SLACK,
    };
    Ok(KahanPack {
        n,
        log_n,
        norms: KahanNorms { skew_q_prime, h, h_minus_q, a },
        bounds,
        checks,
        h_norm_deviation,
        h_eigenvalues,
    })
}

/// Dense `H = (U + Uᵀ) / (2 ln n)`.
fn hermitian_part(u: &UpperToeplitz, log_n: f64) -> RealMatrix {
    let n = u.dim();
    RealMatrix::from_fn(n, |i, j| u.coeffs[i.abs_diff(j)] / (2.0 * log_n))
}

impl KahanPack {
    pub fn n(&self) -> usize {
        self.n
    }

    fn shift_weights(&self) -> UpperToeplitz {
        UpperToeplitz::new(jordan_weights(self.n))
    }

    pub fn q_prime(&self) -> ComplexMatrix {
        self.shift_weights().to_dense(1.0).to_complex()
    }

    pub fn q(&self) -> ComplexMatrix {
        self.shift_weights().to_dense(1.0 / self.log_n).to_complex()
    }

    pub fn h_real(&self) -> RealMatrix {
        hermitian_part(&self.shift_weights(), self.log_n)
    }

    pub fn h(&self) -> ComplexMatrix {
        self.h_real().to_complex()
    }

    pub fn b(&self) -> ComplexMatrix {
        self.h_real().scaled(1.0 / self.norms.h).to_complex()
    }

    pub fn a_real(&self) -> RealMatrix {
        let b = self.h_real().scaled(1.0 / self.norms.h);
        &b * &b
    }

    pub fn a(&self) -> ComplexMatrix {
        self.a_real().to_complex()
    }

    /// Eigenvalues of `H`, ascending.
    pub fn h_eigenvalues(&self) -> &[f64] {
        &self.h_eigenvalues
    }

    /// Eigenvalues of `A`, ascending.
    pub fn a_eigenvalues(&self) -> Vec<f64> {
        let h2 = self.norms.h * self.norms.h;
        let mut v: Vec<f64> = self.h_eigenvalues.iter().map(|&l| l * l / h2).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Eigendecomposition of `H`; its eigenvectors also diagonalize `A`.
    pub fn h_eigen(&self) -> Result<HermitianEigen<f64>> {
        eigh(&self.h_real(), true)
    }

    pub fn a_is_psd(&self) -> bool {
        self.a_eigenvalues().first().is_some_and(|&l| l >= -CHECK_SLACK)
    }

    /// Nilpotent core `(Q/‖H‖)²`: the upper Toeplitz matrix with weights
    /// `Σ_{i+j=k} c_i c_j / (ln n ‖H‖)²` on superdiagonal `k`.
    pub fn witness_core_real(&self) -> RealMatrix {
        let c = jordan_weights(self.n);
        let mut c2 = vec![0.0; self.n];
        for (k, slot) in c2.iter_mut().enumerate().skip(2) {
            *slot = (1..k).map(|i| c[i] * c[k - i]).sum();
        }
        let s = 1.0 / (self.log_n * self.norms.h);
        UpperToeplitz::new(c2).to_dense(s * s)
    }

    /// `‖A − (Q/‖H‖)²‖`, computed matrix-free.
    pub fn witness_defect(&self) -> f64 {
        let u = self.shift_weights();
        let residual = WitnessResidual {
            u: &u,
            b_scale: 1.0 / (2.0 * self.log_n * self.norms.h),
            w_scale: 1.0 / (self.log_n * self.norms.h),
        };
        operator_norm(&residual).value
    }

    /// Certified nilpotent witness against `A`.
    pub fn nil_witness(&self) -> Result<NilWitness> {
        let nilpotent = CertifiedNilpotent::from_core(self.witness_core_real().to_complex())?;
        Ok(NilWitness::with_defect(nilpotent, self.witness_defect()))
    }

    /// Whether the defect is within `2π/ln n`; `None` below order 16 where the bound is vacuous.
    pub fn witness_bound(&self) -> Option<f64> {
        (self.n >= 16).then(|| 2.0 * PI / self.log_n)
    }

    pub fn density(&self, m: usize) -> Result<DensityReport> {
        density_from_eigenvalues(self.n, &self.a_eigenvalues(), m)
    }
}

pub fn nil_witness(n: usize) -> Result<NilWitness> {
    build_kahan(n)?.nil_witness()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub n: usize,
    pub m: usize,
    pub holds: bool,
    /// `hits[k]`: the spectrum meets `[k/m, (k+1)/m)`.
    pub hits: Vec<bool>,
}

pub fn density_check(n: usize, m: usize) -> Result<DensityReport> {
    build_kahan(n)?.density(m)
}

pub fn density_from_eigenvalues(n: usize, eigenvalues: &[f64], m: usize) -> Result<DensityReport> {
    if m == 0 {
        return Err(Error::InvalidArgument("density resolution m must be at least 1".into()));
    }
    let mut hits = vec![false; m];
    for &l in eigenvalues {
        let k = (l * m as f64).floor();
        if (0.0..m as f64).contains(&k) {
            hits[k as usize] = true;
        }
    }
    Ok(DensityReport { n, m, holds: hits.iter().all(|&h| h), hits })
}

/// First order on `ladder` from which `density_check(·, m)` holds for every
/// later ladder entry; `None` if the last entry fails.
pub fn density_onset(packs: &[KahanPack], m: usize) -> Result<Option<usize>> {
    let mut onset = None;
    for p in packs {
        if p.density(m)?.holds {
            onset.get_or_insert(p.n());
        } else {
            onset = None;
        }
    }
    Ok(onset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::op_norm;
    use num_complex::Complex64;

    #[test]
    fn order_two_closed_form() {
        let p = build_kahan(2).unwrap();
        let q = p.q_prime();
        assert_eq!(q[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(q[(0, 0)] + q[(1, 0)] + q[(1, 1)], Complex64::default());
        let expect = 1.0 / (2.0 * LN_2);
        assert!((p.norms.h - expect).abs() < 1e-15);
        assert!((p.h_norm_deviation - (1.0 - expect)).abs() < 1e-15);
        assert!(p.checks.all());
        let a = p.a();
        assert!(op_norm(&(&a - &ComplexMatrix::identity(2))) < 1e-15);
        let w = p.nil_witness().unwrap();
        assert_eq!(w.materialized(), &ComplexMatrix::zeros(2));
        assert!((w.defect() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn structured_norms_match_dense() {
        for n in [3, 5, 12, 40] {
            let p = build_kahan(n).unwrap();
            let qp = p.q_prime();
            let skew = (&qp - &qp.adjoint()).scaled(Complex64::new(0.5, 0.0));
            assert!((op_norm(&skew) - p.norms.skew_q_prime).abs() < 1e-10);
            assert!((op_norm(&(&p.h() - &p.q())) - p.norms.h_minus_q).abs() < 1e-10);
            assert!((op_norm(&p.h()) - p.norms.h).abs() < 1e-10);
            let w = p.nil_witness().unwrap();
            let dense = op_norm(&(&p.a() - w.materialized()));
            assert!((dense - w.defect()).abs() < 1e-9, "n={n}: {dense} vs {}", w.defect());
            let qt = p.q().scaled(Complex64::new(1.0 / p.norms.h, 0.0));
            assert!(op_norm(&(&(&qt * &qt) - w.materialized())) < 1e-12);
        }
    }

    #[test]
    fn density_examples() {
        let r = density_check(2, 2).unwrap();
        assert_eq!(r.hits, vec![false, false]);
        assert!(!r.holds);
        assert!(density_check(3, 1).unwrap().holds);
    }

    #[test]
    fn rejects_small_order() {
        assert!(build_kahan(1).is_err());
    }
}
