//! Complex Schur decomposition: Hessenberg reduction and shifted QR.

use super::matrix::ComplexMatrix;
use super::norm::op_norm;
use super::scalar::phase;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// `original = basis · core · basisᴴ` with `basis` unitary and `core` upper triangular.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurForm {
    pub basis: ComplexMatrix,
    pub core: ComplexMatrix,
}

impl SchurForm {
    pub fn reconstruct(&self) -> ComplexMatrix {
        &(&self.basis * &self.core) * &self.basis.adjoint()
    }

    /// `‖basis·basisᴴ − I‖`
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.basis.dim();
        op_norm(&(&(&self.basis * &self.basis.adjoint()) - &ComplexMatrix::identity(n)))
    }
}

const SWEEPS_PER_EIGENVALUE: usize = 30;

pub fn schur_form(m: &ComplexMatrix) -> Result<SchurForm> {
    let n = m.dim();
    let mut h = m.clone();
    let mut z = ComplexMatrix::identity(n);
    hessenberg(&mut h, &mut z);
    let scale = h.max_abs().max(f64::MIN_POSITIVE);

    let mut hi = n.saturating_sub(1);
    let mut since_deflation = 0;
    let cap = SWEEPS_PER_EIGENVALUE * n.max(1);
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut s = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if s == 0.0 {
                s = scale;
            }
            if sub <= f64::EPSILON * s {
                h[(lo, lo - 1)] = Complex64::default();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        since_deflation += 1;
        if since_deflation > cap {
            return Err(Error::NoConvergence { routine: "complex Schur QR", iterations: cap });
        }
        let mu = if since_deflation % 11 == 0 {
            h[(hi, hi)] + Complex64::new(h[(hi, hi - 1)].norm(), 0.0) * 0.75
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(&mut h, &mut z, lo, hi, mu);
    }
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = Complex64::default();
        }
    }
    Ok(SchurForm { basis: z, core: h })
}

fn hessenberg(a: &mut ComplexMatrix, q: &mut ComplexMatrix) {
    let n = a.dim();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let tail: f64 = x[1..].iter().map(|v| v.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let xnorm = (x[0].norm_sqr() + tail).sqrt();
        let alpha = -phase(x[0]) * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let tau = 2.0 / v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        // Left: rows k+1.. of A.
        let mut s = vec![Complex64::default(); n];
        for (ii, vi) in v.iter().enumerate() {
            let cv = vi.conj();
            for (sj, x) in s.iter_mut().zip(a.row(k + 1 + ii)) {
                *sj += cv * x;
            }
        }
        for (ii, vi) in v.iter().enumerate() {
            let f = vi * tau;
            for (x, sj) in a.row_mut(k + 1 + ii).iter_mut().zip(&s) {
                *x -= f * sj;
            }
        }
        // Right: columns k+1.. of A and Q.
        for mat in [&mut *a, &mut *q] {
            for r in 0..n {
                let row = &mut mat.row_mut(r)[k + 1..];
                let t = row.iter().zip(&v).fold(Complex64::default(), |acc, (x, vj)| acc + x * vj) * tau;
                for (x, vj) in row.iter_mut().zip(&v) {
                    *x -= t * vj.conj();
                }
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = Complex64::default();
        }
    }
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let (r1, r2) = (mean + disc, mean - disc);
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

/// Givens rotation `[[c, s], [−s̄, c]]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b == Complex64::default() {
        return (1.0, Complex64::default());
    }
    if a == Complex64::default() {
        return (0.0, b.conj() / b.norm());
    }
    let na = a.norm();
    let nrm = na.hypot(b.norm());
    (na / nrm, (a / na) * b.conj() / nrm)
}

/// One explicit shifted QR step on the active window `lo..=hi`.
fn qr_sweep(h: &mut ComplexMatrix, z: &mut ComplexMatrix, lo: usize, hi: usize, mu: Complex64) {
    let n = h.dim();
    for k in lo..=hi {
        h[(k, k)] -= mu;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..n {
            let (x, y) = (h[(k, j)], h[(k + 1, j)]);
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = -s.conj() * x + y * c;
        }
        h[(k + 1, k)] = Complex64::default();
        rots.push((c, s));
    }
    for (idx, &(c, s)) in rots.iter().enumerate() {
        let k = lo + idx;
        let rmax = (k + 2).min(hi + 1);
        for r in 0..rmax {
            let (x, y) = (h[(r, k)], h[(r, k + 1)]);
            h[(r, k)] = x * c + s.conj() * y;
            h[(r, k + 1)] = -s * x + y * c;
        }
        for r in 0..n {
            let (x, y) = (z[(r, k)], z[(r, k + 1)]);
            z[(r, k)] = x * c + s.conj() * y;
            z[(r, k + 1)] = -s * x + y * c;
        }
    }
    for k in lo..=hi {
        h[(k, k)] += mu;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::complex_gaussian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn random_reconstruction() {
        for (n, seed) in [(1, 9), (2, 1), (3, 2), (6, 3), (12, 4), (40, 5)] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = complex_gaussian(n, &mut rng);
            let s = schur_form(&m).unwrap();
            assert!(s.core.is_upper());
            assert!(s.unitarity_defect() <= 1e-9);
            let res = op_norm(&(&m - &s.reconstruct()));
            assert!(res <= 1e-8 * (1.0 + op_norm(&m)), "n={n} residual {res}");
        }
    }

    #[test]
    fn lower_shift_becomes_unit_superdiagonal() {
        let m = ComplexMatrix::from_rows(vec![vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let s = schur_form(&m).unwrap();
        assert!(s.core[(0, 0)].norm() < 1e-12 && s.core[(1, 1)].norm() < 1e-12);
        assert!((s.core[(0, 1)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn upper_triangular_input_is_fixed() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(2.0, 1.0), c(0.0, 3.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.5), c(4.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(2.0, -2.0)],
        ])
        .unwrap();
        let s = schur_form(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((s.core[(i, j)].norm() - m[(i, j)].norm()).abs() < 1e-12);
                assert!((s.basis[(i, j)].norm() - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn companion_with_repeated_roots() {
        // (x - 1)^3 has a defective eigenvalue; the Schur diagonal still sits near 1.
        let m = ComplexMatrix::from_rows(vec![
            vec![c(3.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let s = schur_form(&m).unwrap();
        for d in s.core.diagonal() {
            assert!((d - c(1.0, 0.0)).norm() < 1e-4);
        }
    }
}
