//! Seeded random matrices.

use super::matrix::ComplexMatrix;
use super::scalar::{axpy, dot, norm2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent child seed for stream `index` (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of independent standard complex Gaussians.
pub fn complex_gaussian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| complex_normal(rng))
}

/// Orthonormalizes the columns (Gram–Schmidt, two passes), fixing each
/// column's phase so the implied triangular factor has a positive diagonal.
/// Dependent columns are replaced by unit vectors completing the basis.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = m.column(j);
        let original = norm2(&v);
        for _ in 0..2 {
            for q in &cols {
                let c = dot(q, &v);
                axpy(-c, q, &mut v);
            }
        }
        let mut r = norm2(&v);
        if r <= 1e-12 * original.max(1.0) {
            // Complete with the first unit vector not yet spanned.
            for e in 0..n {
                let mut u = vec![Complex64::default(); n];
                u[e] = Complex64::new(1.0, 0.0);
                for q in &cols {
                    let c = dot(q, &u);
                    axpy(-c, q, &mut u);
                }
                r = norm2(&u);
                if r > 0.5 {
                    v = u;
                    break;
                }
            }
        }
        cols.push(v.iter().map(|x| x / r).collect());
    }
    let mut out = ComplexMatrix::zeros(n);
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    out
}

/// Haar-distributed unitary: orthonormalized complex Gaussian matrix.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    orthonormalize_columns(&complex_gaussian(n, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::op_norm;

    #[test]
    fn haar_is_unitary_and_reproducible() {
        let u = haar_unitary(8, &mut seeded_rng(42));
        let gram = &u.adjoint() * &u;
        assert!(op_norm(&(&gram - &ComplexMatrix::identity(8))) < 1e-12);
        assert_eq!(u, haar_unitary(8, &mut seeded_rng(42)));
    }

    #[test]
    fn derived_seeds_differ() {
        let a: Vec<u64> = (0..100).map(|i| derive_seed(7, i)).collect();
        let mut b = a.clone();
        b.sort();
        b.dedup();
        assert_eq!(a.len(), b.len());
    }
}
