use super::grid::GridBox;
use crate::error::{Error, Result};
use crate::linalg::Polynomial;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Parameter samples per path segment.
pub const SAMPLES_PER_SEGMENT: usize = 64;
pub const DEFAULT_MAX_DEGREE: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathFit {
    /// Maps `[0, 1]` along the path; `p(0) = 0`, `p(1) ≈` the last center.
    pub poly: Polynomial,
    pub sup_error: f64,
}

/// Piecewise-linear path through the box centers, parametrized on `[0, 1]`
/// with one unit of parameter per segment divided evenly.
fn path_point(centers: &[Complex64], t: f64) -> Complex64 {
    let segments = centers.len() - 1;
    let x = (t * segments as f64).clamp(0.0, segments as f64);
    let k = (x.floor() as usize).min(segments - 1);
    centers[k] + (centers[k + 1] - centers[k]) * (x - k as f64)
}

/// Chebyshev–Lobatto points on each segment, endpoints shared.
fn sample_parameters(segments: usize) -> Vec<f64> {
    let mut ts = Vec::with_capacity(segments * (SAMPLES_PER_SEGMENT - 1) + 1);
    for k in 0..segments {
        for i in 0..SAMPLES_PER_SEGMENT - 1 {
            let local = 0.5 * (1.0 - (PI * i as f64 / (SAMPLES_PER_SEGMENT - 1) as f64).cos());
            ts.push((k as f64 + local) / segments as f64);
        }
    }
    ts.push(1.0);
    ts
}

/// `T_k(2t − 1) − T_k(−1)` for `k = 1..=degree`.
fn basis_row(t: f64, degree: usize) -> Vec<f64> {
    let x = 2.0 * t - 1.0;
    let (mut prev, mut cur) = (1.0, x);
    let mut row = Vec::with_capacity(degree);
    for k in 1..=degree {
        let at_minus_one = if k % 2 == 0 { 1.0 } else { -1.0 };
        row.push(cur - at_minus_one);
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    row
}

/// Monomial coefficients (in `t`) of `T_k(2t − 1)` for `k = 0..=degree`.
fn shifted_chebyshev_monomials(degree: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![vec![1.0], vec![-1.0, 2.0]];
    for k in 2..=degree {
        let (a, b) = (&out[k - 1], &out[k - 2]);
        let mut next = vec![0.0; k + 1];
        for (j, &c) in a.iter().enumerate() {
            next[j + 1] += 4.0 * c;
            next[j] -= 2.0 * c;
        }
        for (j, &c) in b.iter().enumerate() {
            next[j] -= c;
        }
        out.push(next);
    }
    out.truncate(degree + 1);
    out
}

/// Least squares `min ‖A x − b‖` for a tall real `A` (row-major, `cols` wide)
/// and complex `b`, by Householder QR.
fn least_squares(mut a: Vec<f64>, cols: usize, mut b: Vec<Complex64>) -> Vec<Complex64> {
    let rows = b.len();
    for k in 0..cols {
        let norm = (k..rows).map(|i| a[i * cols + k].powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k * cols + k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..rows).map(|i| a[i * cols + k]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        for j in k..cols {
            let s: f64 = v.iter().enumerate().map(|(r, vi)| vi * a[(k + r) * cols + j]).sum::<f64>() * 2.0 / vv;
            for (r, vi) in v.iter().enumerate() {
                a[(k + r) * cols + j] -= s * vi;
            }
        }
        let s: Complex64 = v.iter().enumerate().map(|(r, vi)| b[k + r] * vi).sum::<Complex64>() * (2.0 / vv);
        for (r, vi) in v.iter().enumerate() {
            b[k + r] -= s * vi;
        }
    }
    let mut x = vec![Complex64::default(); cols];
    for k in (0..cols).rev() {
        let mut s = b[k];
        for j in k + 1..cols {
            s -= x[j] * a[k * cols + j];
        }
        let d = a[k * cols + k];
        x[k] = if d.abs() > 1e-300 { s / d } else { Complex64::default() };
    }
    x
}

/// Fits a polynomial vanishing at 0 to the path through the box centers,
/// raising the degree until the sampled sup error is at most `eps/2`.
pub fn fit_path_poly(path: &[GridBox], eps: f64, max_deg: usize) -> Result<PathFit> {
    if path.first() != Some(&GridBox::ORIGIN) {
        return Err(Error::InvalidArgument("path must start at the origin box".into()));
    }
    if path.len() == 1 {
        return Ok(PathFit { poly: Polynomial::zero(), sup_error: 0.0 });
    }
    let centers: Vec<Complex64> = path.iter().map(|b| b.center(eps)).collect();
    let ts = sample_parameters(path.len() - 1);
    let targets: Vec<Complex64> = ts.iter().map(|&t| path_point(&centers, t)).collect();
    let monomials = shifted_chebyshev_monomials(max_deg.max(1));
    let mut last_error = f64::INFINITY;
    for degree in 1..=max_deg {
        let design: Vec<f64> = ts.iter().flat_map(|&t| basis_row(t, degree)).collect();
        let cheb = least_squares(design, degree, targets.clone());
        let mut coeffs = vec![Complex64::default(); degree + 1];
        for (k, &c) in cheb.iter().enumerate() {
            for (j, &m) in monomials[k + 1].iter().enumerate().skip(1) {
                coeffs[j] += c * m;
            }
        }
        let poly = Polynomial::new(coeffs)?;
        last_error = ts.iter().zip(&targets).map(|(&t, &z)| (poly.eval_real(t) - z).norm()).fold(0.0, f64::max);
        if last_error <= eps / 2.0 {
            return Ok(PathFit { poly, sup_error: last_error });
        }
    }
    Err(Error::DegreeCapExceeded { max_degree: max_deg, error: last_error, target: eps / 2.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_segment_is_linear() {
        let fit = fit_path_poly(&[GridBox(0, 0), GridBox(1, 0)], 1.0, 24).unwrap();
        assert_eq!(fit.poly.degree(), 1);
        assert!((fit.poly.coeffs()[1] - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        assert!(fit.sup_error < 1e-13);
    }

    #[test]
    fn trivial_path_is_zero() {
        let fit = fit_path_poly(&[GridBox(0, 0)], 1.0, 24).unwrap();
        assert!(fit.poly.is_zero());
    }

    #[test]
    fn l_shape_fits_within_half_box() {
        let fit = fit_path_poly(&[GridBox(0, 0), GridBox(1, 0), GridBox(1, 1)], 1.0, 24).unwrap();
        assert!(fit.sup_error <= 0.5 && fit.poly.degree() <= 24);
        assert_eq!(fit.poly.coeffs()[0], Complex64::default());
    }

    #[test]
    fn monomial_conversion_matches_recurrence() {
        let m = shifted_chebyshev_monomials(12);
        for &t in &[0.0, 0.13, 0.5, 0.77, 1.0] {
            let row = basis_row(t, 12);
            for k in 1..=12 {
                let direct: f64 = m[k].iter().enumerate().map(|(j, c)| c * t.powi(j as i32)).sum();
                let shifted = direct - if k % 2 == 0 { 1.0 } else { -1.0 };
                assert!((shifted - row[k - 1]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn impossible_cap_errors() {
        let path = [GridBox(0, 0), GridBox(1, 0), GridBox(1, 1), GridBox(0, 2), GridBox(-1, 2)];
        assert!(matches!(fit_path_poly(&path, 1.0, 1), Err(Error::DegreeCapExceeded { .. })));
    }
}
