//! Hermitian eigensolver: Householder tridiagonalization followed by implicit QL.

use super::matrix::SquareMatrix;
use super::scalar::{phase, Scalar};
use super::tridiag::tridiagonal_eigen;
use crate::error::{Error, Result};

/// Eigenvalues in ascending order; eigenvectors as matching columns when requested.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    pub values: Vec<f64>,
    pub vectors: Option<SquareMatrix<T>>,
}

/// Relative asymmetry accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub fn eigh<T: Scalar>(m: &SquareMatrix<T>, want_vectors: bool) -> Result<HermitianEigen<T>> {
    let asym = m.hermitian_defect();
    if asym > HERMITIAN_TOL * (1.0 + m.max_abs()) {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let n = m.dim();
    let mut a = m.as_slice().to_vec();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let mut couplings = vec![T::zero(); n];
    let mut taus = vec![0.0; n];

    // Reduce the lower triangle; reflector k is stored below the diagonal of column k.
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let x: Vec<T> = (k + 1..n).map(|i| a[i * n + k]).collect();
        let tail: f64 = x[1..].iter().map(|v| v.abs_sq()).sum();
        if tail == 0.0 {
            couplings[k] = x[0];
            taus[k] = 0.0;
            diag[k] = a[k * n + k].re();
            continue;
        }
        let xnorm = (x[0].abs_sq() + tail).sqrt();
        let alpha = -phase(x[0]).scale(xnorm);
        let mut v = x;
        v[0] -= alpha;
        let vnorm_sq: f64 = v.iter().map(|z| z.abs_sq()).sum();
        let tau = 2.0 / vnorm_sq;

        // p = tau * A22 v using the lower triangle only.
        let mut p = vec![T::zero(); len];
        for ii in 0..len {
            let i = k + 1 + ii;
            let row = &a[i * n + k + 1..i * n + i];
            let vi = v[ii];
            let mut acc = T::zero();
            for (jj, &aij) in row.iter().enumerate() {
                acc += aij * v[jj];
                p[jj] += aij.conj() * vi;
            }
            p[ii] += acc + a[i * n + i] * vi;
        }
        for pi in p.iter_mut() {
            *pi = pi.scale(tau);
        }
        let vp = v.iter().zip(&p).fold(T::zero(), |s, (&vi, &pi)| s + vi.conj() * pi);
        let kcoef = vp.scale(0.5 * tau);
        let w: Vec<T> = p.iter().zip(&v).map(|(&pi, &vi)| pi - kcoef * vi).collect();
        for ii in 0..len {
            let i = k + 1 + ii;
            let (vi, wi) = (v[ii], w[ii]);
            let row = &mut a[i * n + k + 1..=i * n + i];
            for (jj, aij) in row.iter_mut().enumerate() {
                *aij -= vi * w[jj].conj() + wi * v[jj].conj();
            }
        }
        diag[k] = a[k * n + k].re();
        couplings[k] = alpha;
        taus[k] = tau;
        for ii in 0..len {
            a[(k + 1 + ii) * n + k] = v[ii];
        }
    }
    if n >= 2 {
        diag[n - 2] = a[(n - 2) * n + n - 2].re();
        couplings[n - 2] = a[(n - 1) * n + n - 2];
        taus[n - 2] = 0.0;
    }
    diag[n - 1] = a[(n - 1) * n + n - 1].re();

    // Diagonal similarity making the couplings real and nonnegative.
    let mut phases = vec![T::one(); n];
    for k in 0..n.saturating_sub(1) {
        let e = couplings[k];
        off[k] = e.abs();
        phases[k + 1] = if off[k] == 0.0 { T::one() } else { phases[k] * e.scale(1.0 / off[k]) };
    }

    if !want_vectors {
        tridiagonal_eigen(&mut diag, &mut off, &mut [])?;
        return Ok(HermitianEigen { values: diag, vectors: None });
    }
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tridiagonal_eigen(&mut diag, &mut off, &mut z)?;
    let mut vecs: Vec<T> = z.iter().map(|&x| T::from_real(x)).collect();
    for i in 0..n {
        for j in 0..n {
            vecs[i * n + j] *= phases[i];
        }
    }
    // Apply reflectors in reverse order: V = H_0 H_1 … H_{n-3} (D Z).
    for k in (0..n.saturating_sub(2)).rev() {
        let tau = taus[k];
        if tau == 0.0 {
            continue;
        }
        let v: Vec<T> = (k + 1..n).map(|i| a[i * n + k]).collect();
        let mut s = vec![T::zero(); n];
        for (ii, &vi) in v.iter().enumerate() {
            let row = &vecs[(k + 1 + ii) * n..(k + 2 + ii) * n];
            let cv = vi.conj();
            for (sj, &x) in s.iter_mut().zip(row) {
                *sj += cv * x;
            }
        }
        for (ii, &vi) in v.iter().enumerate() {
            let f = vi.scale(tau);
            let row = &mut vecs[(k + 1 + ii) * n..(k + 2 + ii) * n];
            for (x, &sj) in row.iter_mut().zip(&s) {
                *x -= f * sj;
            }
        }
    }
    Ok(HermitianEigen { values: diag, vectors: Some(SquareMatrix::from_row_major(n, vecs)?) })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh<T: Scalar>(m: &SquareMatrix<T>) -> Result<Vec<f64>> {
    Ok(eigh(m, false)?.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random::complex_gaussian, ComplexMatrix};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = complex_gaussian(n, &mut rng);
        &g + &g.adjoint()
    }

    #[test]
    fn reconstructs_random_hermitian() {
        for (n, seed) in [(1, 1), (2, 2), (3, 3), (7, 4), (20, 5)] {
            let m = hermitian(n, seed);
            let e = eigh(&m, true).unwrap();
            let v = e.vectors.unwrap();
            let d = ComplexMatrix::from_diagonal(&e.values.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>());
            let rec = &(&v * &d) * &v.adjoint();
            assert!((&rec - &m).max_abs() < 1e-12 * (1.0 + m.max_abs()) * n as f64);
            let gram = &v.adjoint() * &v;
            assert!((&gram - &ComplexMatrix::identity(n)).max_abs() < 1e-12 * n as f64);
        }
    }

    #[test]
    fn real_symmetric_matches_trace_and_sorting() {
        let m = SquareMatrix::from_fn(6, |i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let vals = eigvalsh(&m).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let tr: f64 = vals.iter().sum();
        assert!((tr - m.trace()).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = SquareMatrix::from_rows(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(eigh(&m, false), Err(Error::NotHermitian { .. })));
    }
}
