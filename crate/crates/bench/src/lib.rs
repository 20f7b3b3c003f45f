//! Seeded inputs shared by the benchmarks.

use nilprox_core::linalg::random::{complex_gaussian, seeded_rng};
use nilprox_core::{Complex64, ComplexMatrix};

pub fn gaussian(n: usize, seed: u64) -> ComplexMatrix {
    complex_gaussian(n, &mut seeded_rng(seed))
}

/// Two multisets of `n` points on a slightly perturbed lattice.
pub fn multisets(n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let g = gaussian(n, 7);
    let a = (0..n).map(|i| Complex64::new((i % 17) as f64, (i / 17) as f64)).collect::<Vec<_>>();
    let b = a.iter().enumerate().map(|(i, z)| z + g[(i, 0)] * 0.3).collect();
    (a, b)
}
