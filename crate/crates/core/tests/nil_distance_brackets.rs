use nilprox_core::linalg::random::{complex_gaussian, haar_unitary, seeded_rng};
use nilprox_core::linalg::{op_norm, schur_form, CertifiedNilpotent, ComplexMatrix};
use nilprox_core::nil_distance::{
    bracket, estimate, lower_bounds, oracle_small, upper_schur, EstimateConfig, OracleConfig,
};
use nilprox_core::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn quick() -> EstimateConfig {
    EstimateConfig { restarts: 4, iters: 96, seed: 11, warm_start: None }
}

/// Mix of general, normal and positive semidefinite inputs.
fn sample(kind: u8, n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = seeded_rng(seed);
    let g = complex_gaussian(n, &mut rng);
    match kind % 3 {
        0 => g,
        1 => {
            let u = haar_unitary(n, &mut rng);
            &(&u * &ComplexMatrix::from_diagonal(&g.diagonal())) * &u.adjoint()
        }
        _ => {
            let u = haar_unitary(n, &mut rng);
            let d: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.random::<f64>(), 0.0)).collect();
            &(&u * &ComplexMatrix::from_diagonal(&d)) * &u.adjoint()
        }
    }
}

fn projection(n: usize, rank: usize, seed: u64) -> ComplexMatrix {
    let u = haar_unitary(n, &mut seeded_rng(seed));
    let d: Vec<Complex64> = (0..n).map(|i| Complex64::new(if i < rank { 1.0 } else { 0.0 }, 0.0)).collect();
    &(&u * &ComplexMatrix::from_diagonal(&d)) * &u.adjoint()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn brackets_are_ordered(kind in any::<u8>(), n in 2usize..9, seed in any::<u64>()) {
        let m = sample(kind, n, seed);
        let b = bracket(&m, &quick()).unwrap();
        prop_assert!(b.is_consistent(), "{:?}", b.summary());
        prop_assert!(!b.below_lower_bound);
    }

    #[test]
    fn schur_witness_defect_is_spectral_radius(n in 1usize..9, seed in any::<u64>()) {
        let m = complex_gaussian(n, &mut seeded_rng(seed));
        let radius = schur_form(&m).unwrap().core.diagonal().iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!((upper_schur(&m).unwrap().defect() - radius).abs() <= 1e-9 * (1.0 + radius));
    }

    #[test]
    fn projections_sit_between_half_and_one(n in 2usize..7, seed in any::<u64>(), r in 1usize..6) {
        let rank = 1 + r % (n - 1);
        let p = projection(n, rank, seed);
        let lb = lower_bounds(&p).unwrap();
        prop_assert!((lb.gap_lower - 0.5).abs() < 1e-9);
        prop_assert!((lb.trace_lower - rank as f64 / n as f64).abs() < 1e-9);
        let e = estimate(&p, &quick()).unwrap().value;
        prop_assert!((0.5 - 1e-6..=1.0 + 1e-9).contains(&e), "{e}");
    }
}

#[test]
fn identity_bracket_collapses() {
    for n in [1, 2, 5, 8] {
        let b = bracket(&ComplexMatrix::identity(n), &quick()).unwrap();
        assert!((b.lower() - 1.0).abs() < 1e-9);
        assert!((b.upper() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn more_restarts_never_increase_the_estimate() {
    let m = sample(0, 5, 99);
    let mut prev = f64::INFINITY;
    for restarts in [1, 2, 4, 8] {
        let v = estimate(&m, &EstimateConfig { restarts, iters: 80, seed: 3, warm_start: None }).unwrap().value;
        assert!(v <= prev + 1e-15, "{restarts}: {v} > {prev}");
        prev = v;
    }
}

#[test]
fn estimator_agrees_with_oracle_on_small_cases() {
    let cfg = OracleConfig { grid_density: 1000, polish_iters: 1500, seed: 5 };
    for seed in 0..6 {
        let m = complex_gaussian(2, &mut seeded_rng(1000 + seed));
        let est = estimate(&m, &EstimateConfig::default()).unwrap().value;
        let oracle = oracle_small(&m, &cfg).unwrap();
        assert!((est - oracle).abs() <= 1e-3, "seed {seed}: {est} vs {oracle}");
    }
}

#[test]
fn warm_start_is_never_worse() {
    let small = projection(4, 1, 8);
    let first = estimate(&small, &EstimateConfig::default()).unwrap();
    let big = ComplexMatrix::direct_sum(&[&small, &ComplexMatrix::zeros(4)]).unwrap();
    let pad = CertifiedNilpotent::direct_sum(&[first.witness.nilpotent(), &CertifiedNilpotent::zero(4)]).unwrap();
    let warm = estimate(&big, &EstimateConfig { restarts: 2, iters: 50, seed: 0, warm_start: Some(pad) }).unwrap();
    assert!(warm.value <= first.value + 1e-12);
    assert!((op_norm(&(&big - warm.witness.materialized())) - warm.value).abs() < 1e-9);
}
