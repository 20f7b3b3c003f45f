//! Brute-force distance to the nilpotent matrices in dimensions up to 3.
//!
//! Shares no search code with the estimator: unitaries are parametrized by the
//! exponential of a skew-Hermitian matrix, singular values come from closed
//! forms, and the polish is a Nelder–Mead simplex.

use crate::error::{Error, Result};
use crate::linalg::random::{haar_unitary, seeded_rng};
use crate::linalg::ComplexMatrix;
use num_complex::Complex64;

pub const MAX_ORACLE_DIM: usize = 3;

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    /// Number of sampled unitaries.
    pub grid_density: usize,
    /// Nelder–Mead iterations per polish round.
    pub polish_iters: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { grid_density: 4000, polish_iters: 4000, seed: 0x0ac1e }
    }
}

const POLISH_ROUNDS: usize = 6;
const POLISH_SEEDS: usize = 8;

pub fn oracle_small(m: &ComplexMatrix, cfg: &OracleConfig) -> Result<f64> {
    let n = m.dim();
    if n > MAX_ORACLE_DIM {
        return Err(Error::InvalidArgument(format!("oracle handles dimension ≤ {MAX_ORACLE_DIM}, got {n}")));
    }
    if n == 1 {
        return Ok(m[(0, 0)].norm());
    }
    let mut rng = seeded_rng(cfg.seed);
    // Sample unitaries with the Frobenius-optimal strictly upper part.
    let mut samples: Vec<(f64, ComplexMatrix)> = (0..cfg.grid_density.max(1))
        .map(|_| {
            let u = haar_unitary(n, &mut rng);
            let x = &(&u.adjoint() * m) * &u;
            let e = ComplexMatrix::from_fn(n, |i, j| if j > i { Complex64::default() } else { x[(i, j)] });
            (largest_singular_value(&e), u)
        })
        .collect();
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));

    let np = n * n + n * (n - 1);
    let mut best = samples[0].0;
    for (_, u0) in samples.iter().take(POLISH_SEEDS) {
        let objective = |params: &[f64]| -> f64 {
            let u = u0 * &expm_skew(&skew_from_params(n, &params[..n * n]));
            let x = &(&u.adjoint() * m) * &u;
            let mut k = n * n;
            let e = ComplexMatrix::from_fn(n, |i, j| {
                if j > i {
                    let t = Complex64::new(params[k], params[k + 1]);
                    k += 2;
                    x[(i, j)] - t
                } else {
                    x[(i, j)]
                }
            });
            largest_singular_value(&e)
        };
        let mut start = vec![0.0; np];
        let x0 = &(&u0.adjoint() * m) * u0;
        let mut k = n * n;
        for i in 0..n {
            for j in i + 1..n {
                start[k] = x0[(i, j)].re;
                start[k + 1] = x0[(i, j)].im;
                k += 2;
            }
        }
        let mut scale = 0.3;
        for _ in 0..POLISH_ROUNDS {
            let (xbest, fbest) = nelder_mead(&objective, &start, scale, cfg.polish_iters);
            start = xbest;
            best = best.min(fbest);
            scale *= 0.3;
        }
    }
    Ok(best)
}

/// Skew-Hermitian matrix from `n²` reals: diagonal imaginary parts, then
/// real and imaginary parts of the strictly upper entries.
fn skew_from_params(n: usize, p: &[f64]) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(n);
    for i in 0..n {
        a[(i, i)] = Complex64::new(0.0, p[i]);
    }
    let mut k = n;
    for i in 0..n {
        for j in i + 1..n {
            let z = Complex64::new(p[k], p[k + 1]);
            a[(i, j)] = z;
            a[(j, i)] = -z.conj();
            k += 2;
        }
    }
    a
}

/// Matrix exponential by scaling and squaring of a Taylor polynomial.
fn expm_skew(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let norm = a.frobenius_norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a.scaled(Complex64::new(0.5f64.powi(squarings as i32), 0.0));
    let mut result = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=16 {
        term = (&term * &scaled).scaled(Complex64::new(1.0 / k as f64, 0.0));
        result = &result + &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Closed-form largest singular value for dimensions 1–3.
pub fn largest_singular_value(e: &ComplexMatrix) -> f64 {
    match e.dim() {
        1 => e[(0, 0)].norm(),
        2 => {
            let f2 = e.frobenius_norm().powi(2);
            let det = (e[(0, 0)] * e[(1, 1)] - e[(0, 1)] * e[(1, 0)]).norm();
            let disc = (f2 * f2 - 4.0 * det * det).max(0.0).sqrt();
            (0.5 * (f2 + disc)).max(0.0).sqrt()
        }
        3 => largest_eigenvalue_hermitian3(&(&e.adjoint() * e)).max(0.0).sqrt(),
        _ => panic!("closed form only for dimensions up to 3"),
    }
}

/// Largest root of the characteristic cubic of a 3×3 Hermitian matrix (trigonometric form).
fn largest_eigenvalue_hermitian3(g: &ComplexMatrix) -> f64 {
    let (a, b, c) = (g[(0, 0)].re, g[(1, 1)].re, g[(2, 2)].re);
    let (d, e, f) = (g[(0, 1)], g[(1, 2)], g[(0, 2)]);
    let p1 = d.norm_sqr() + e.norm_sqr() + f.norm_sqr();
    let q = (a + b + c) / 3.0;
    let p2 = (a - q).powi(2) + (b - q).powi(2) + (c - q).powi(2) + 2.0 * p1;
    if p2 <= 0.0 {
        return q;
    }
    let p = (p2 / 6.0).sqrt();
    // det((G − qI)/p), Hermitian 3×3.
    let (a1, b1, c1) = ((a - q) / p, (b - q) / p, (c - q) / p);
    let (d1, e1, f1) = (d / p, e / p, f / p);
    let det =
        a1 * b1 * c1 + 2.0 * (d1 * e1 * f1.conj()).re - a1 * e1.norm_sqr() - b1 * f1.norm_sqr() - c1 * d1.norm_sqr();
    let r = (det / 2.0).clamp(-1.0, 1.0);
    q + 2.0 * p * (r.acos() / 3.0).cos()
}

fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, x0: &[f64], scale: f64, iters: usize) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += scale;
        let fx = f(&x);
        simplex.push((x, fx));
    }
    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(&p, &q)| p + t * (q - p)).collect() };
    for _ in 0..iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        if spread.abs() < 1e-15 {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / n as f64;
            }
        }
        let worst = simplex[n].0.clone();
        let reflected = lerp(&centroid, &worst, -1.0);
        let fr = f(&reflected);
        if fr < simplex[0].1 {
            let expanded = lerp(&centroid, &worst, -2.0);
            let fe = f(&expanded);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let (target, ft) = if fr < simplex[n].1 { (reflected, fr) } else { (worst, simplex[n].1) };
            let contracted = lerp(&centroid, &target, 0.5);
            let fc = f(&contracted);
            if fc < ft {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let x = lerp(&best, &entry.0, 0.5);
                    let fx = f(&x);
                    *entry = (x, fx);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::op_norm;
    use crate::linalg::random::complex_gaussian;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn closed_form_singular_values_match_lanczos() {
        let mut rng = seeded_rng(3);
        for n in 1..=3 {
            for _ in 0..20 {
                let e = complex_gaussian(n, &mut rng);
                assert!((largest_singular_value(&e) - op_norm(&e)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn exponential_of_skew_is_unitary() {
        let a = skew_from_params(3, &[0.3, -2.0, 1.1, 0.5, 2.5, -0.7, 0.2, 1.9, -3.0]);
        let u = expm_skew(&a);
        assert!(op_norm(&(&(&u.adjoint() * &u) - &ComplexMatrix::identity(3))) < 1e-13);
    }

    #[test]
    fn examples() {
        let cfg = OracleConfig { grid_density: 500, polish_iters: 1500, seed: 1 };
        assert_eq!(oracle_small(&ComplexMatrix::zeros(2), &cfg).unwrap(), 0.0);
        let p = oracle_small(&ComplexMatrix::from_diagonal(&[c(1.0), c(0.0)]), &cfg).unwrap();
        assert!((0.5..=0.7072).contains(&p), "{p}");
        let id = oracle_small(&ComplexMatrix::identity(2), &cfg).unwrap();
        assert!((id - 1.0).abs() < 1e-9, "{id}");
        assert!(oracle_small(&ComplexMatrix::identity(4), &cfg).is_err());
    }
}
