//! Operator (spectral) norm by Lanczos iteration on `MᴴM`.

use super::matrix::SquareMatrix;
use super::scalar::{axpy, dot, norm2, Scalar};
use super::tridiag::tridiagonal_eigen;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Relative accuracy target for the largest eigenvalue of `MᴴM`.
const RITZ_TOL: f64 = 1e-11;
const MAX_BASIS: usize = 96;
const START_SEED: u64 = 0x006e_696c_7072_6f78;

/// Matrix-free square operator.
pub trait LinearOperator<T: Scalar> {
    fn dim(&self) -> usize;
    /// `y = A x`
    fn apply(&self, x: &[T], y: &mut [T]);
    /// `y = Aᴴ x`
    fn apply_adjoint(&self, x: &[T], y: &mut [T]);
}

impl<T: Scalar> LinearOperator<T> for SquareMatrix<T> {
    fn dim(&self) -> usize {
        SquareMatrix::dim(self)
    }
    fn apply(&self, x: &[T], y: &mut [T]) {
        self.apply_into(x, y)
    }
    fn apply_adjoint(&self, x: &[T], y: &mut [T]) {
        self.apply_adjoint_into(x, y)
    }
}

/// Difference `A − B` of two operators, applied without forming it.
pub struct Difference<'a, T: Scalar> {
    pub lhs: &'a dyn LinearOperator<T>,
    pub rhs: &'a dyn LinearOperator<T>,
}

impl<T: Scalar> LinearOperator<T> for Difference<'_, T> {
    fn dim(&self) -> usize {
        self.lhs.dim()
    }
    fn apply(&self, x: &[T], y: &mut [T]) {
        let mut t = vec![T::zero(); x.len()];
        self.lhs.apply(x, y);
        self.rhs.apply(x, &mut t);
        y.iter_mut().zip(&t).for_each(|(a, &b)| *a -= b);
    }
    fn apply_adjoint(&self, x: &[T], y: &mut [T]) {
        let mut t = vec![T::zero(); x.len()];
        self.lhs.apply_adjoint(x, y);
        self.rhs.apply_adjoint(x, &mut t);
        y.iter_mut().zip(&t).for_each(|(a, &b)| *a -= b);
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    /// Number of `MᴴM` products used.
    pub products: usize,
    pub converged: bool,
}

/// Largest singular value of a dense matrix.
pub fn op_norm<T: Scalar>(m: &SquareMatrix<T>) -> f64 {
    operator_norm(m).value
}

/// Largest singular value of a matrix-free operator, with iteration diagnostics.
///
/// The start vector is drawn from a fixed internal seed, so results are
/// reproducible. The iteration cap is `10·dim + 1000` products.
pub fn operator_norm<T: Scalar, O: LinearOperator<T> + ?Sized>(op: &O) -> NormEstimate {
    let n = op.dim();
    if n == 0 {
        return NormEstimate { value: 0.0, products: 0, converged: true };
    }
    let cap = 10 * n + 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED ^ n as u64);
    let mut start: Vec<T> = (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            T::from_parts(re, im)
        })
        .collect();
    normalize(&mut start);

    let mut products = 0;
    let mut tmp = vec![T::zero(); n];
    let mut best = 0.0f64;
    loop {
        let mut basis: Vec<Vec<T>> = vec![start.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let limit = MAX_BASIS.min(n);
        for k in 0..limit {
            let mut w = vec![T::zero(); n];
            op.apply(&basis[k], &mut tmp);
            op.apply_adjoint(&tmp, &mut w);
            products += 1;
            let alpha = dot(&basis[k], &w).re();
            axpy(T::from_real(-alpha), &basis[k], &mut w);
            if k > 0 {
                axpy(T::from_real(-betas[k - 1]), &basis[k - 1], &mut w);
            }
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    axpy(-c, v, &mut w);
                }
            }
            let beta = norm2(&w);
            alphas.push(alpha);

            let (theta, last) = top_ritz(&alphas, &betas);
            best = best.max(theta);
            let residual = beta * last.abs();
            let exhausted = k + 1 == n || beta <= f64::EPSILON * theta.max(f64::MIN_POSITIVE);
            if residual <= RITZ_TOL * theta || exhausted || theta == 0.0 && beta == 0.0 {
                return NormEstimate { value: theta.max(0.0).sqrt(), products, converged: true };
            }
            if products >= cap {
                return NormEstimate { value: best.max(0.0).sqrt(), products, converged: false };
            }
            betas.push(beta);
            let inv = 1.0 / beta;
            basis.push(w.iter().map(|&v| v.scale(inv)).collect());
        }
        // Restart from the current top Ritz vector.
        let k = alphas.len();
        let mut d = alphas.clone();
        let mut e = betas[..k - 1].to_vec();
        e.push(0.0);
        let mut z = vec![0.0; k * k];
        for i in 0..k {
            z[i * k + i] = 1.0;
        }
        if tridiagonal_eigen(&mut d, &mut e, &mut z).is_err() {
            return NormEstimate { value: best.max(0.0).sqrt(), products, converged: false };
        }
        start = vec![T::zero(); n];
        for (j, v) in basis.iter().take(k).enumerate() {
            axpy(T::from_real(z[j * k + k - 1]), v, &mut start);
        }
        normalize(&mut start);
    }
}

/// Largest eigenvalue of the Lanczos tridiagonal and the last component of its eigenvector.
fn top_ritz(alphas: &[f64], betas: &[f64]) -> (f64, f64) {
    let k = alphas.len();
    let mut d = alphas.to_vec();
    let mut e = betas[..k - 1].to_vec();
    e.push(0.0);
    let mut z = vec![0.0; k];
    z[k - 1] = 1.0;
    match tridiagonal_eigen(&mut d, &mut e, &mut z) {
        Ok(()) => (d[k - 1], z[k - 1]),
        Err(_) => (d.iter().cloned().fold(f64::MIN, f64::max), 1.0),
    }
}

fn normalize<T: Scalar>(v: &mut [T]) {
    let s = norm2(v);
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x = x.scale(1.0 / s));
    }
}
