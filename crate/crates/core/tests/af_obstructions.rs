use nilprox_core::af_obstructions::{
    degree_cap_check, dyadic_example, greedy_sequence, ladder_floor, shift_scan, BlockAlgebra,
};
use nilprox_core::kahan::build_kahan;
use nilprox_core::linalg::random::{complex_gaussian, seeded_rng};
use nilprox_core::linalg::{CertifiedNilpotent, ComplexMatrix};
use nilprox_core::nil_distance::lower_bounds;
use nilprox_core::{Complex64, Error};
use proptest::prelude::*;

fn strictly_upper(n: usize, seed: u64) -> ComplexMatrix {
    complex_gaussian(n, &mut seeded_rng(seed)).strict_upper()
}

fn power_vanishes(m: &ComplexMatrix, k: usize) -> bool {
    let mut p = ComplexMatrix::identity(m.dim());
    for _ in 0..k {
        p = p.matmul(m).unwrap();
    }
    p.max_abs() < 1e-9
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn nilpotents_in_block_algebras_obey_the_cap(sizes in proptest::collection::vec(1usize..6, 1..4), seed in any::<u64>()) {
        let alg = BlockAlgebra::new(sizes.clone()).unwrap();
        let blocks: Vec<CertifiedNilpotent> = sizes
            .iter()
            .enumerate()
            .map(|(i, &s)| CertifiedNilpotent::from_core(strictly_upper(s, seed ^ i as u64)).unwrap())
            .collect();
        let cap = degree_cap_check(&alg, &blocks).unwrap();
        prop_assert!(cap.holds);
        prop_assert_eq!(cap.cap, *sizes.iter().max().unwrap());
        let refs: Vec<&CertifiedNilpotent> = blocks.iter().collect();
        let whole = CertifiedNilpotent::direct_sum(&refs).unwrap();
        prop_assert!(alg.contains(whole.materialized()));
        prop_assert!(power_vanishes(whole.materialized(), cap.cap));
    }

    #[test]
    fn shift_bound_vanishes_only_at_the_root(n in 1usize..6, seed in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let t = complex_gaussian(n, &mut seeded_rng(seed));
        let l = Complex64::new(re, im);
        let scan = shift_scan(&t, &[l, Complex64::default()]);
        let shifted = &ComplexMatrix::identity(n).scaled(scan.root) + &t;
        prop_assert!(shifted.trace().norm() < 1e-12);
        prop_assert!((scan.bounds[0].1 - (l - scan.root).norm()).abs() < 1e-12);
        let direct = lower_bounds(&(&ComplexMatrix::identity(n).scaled(l) + &t)).unwrap().trace_lower;
        prop_assert!((scan.bounds[0].1 - direct).abs() < 1e-9);
    }
}

#[test]
fn dyadic_bounds_are_exact() {
    for n in 1..=10 {
        let d = dyadic_example(n).unwrap();
        let size = 1u64 << n;
        assert_eq!(d.diagonal.len() as u64, size);
        assert_eq!(d.trace_lower_exact, (size + 1, 2 * size));
        assert_eq!(d.gap_lower, 1.0 / (2 * size) as f64);
        assert!(d.trace_lower >= 0.5);
        let lb = lower_bounds(&d.matrix()).unwrap();
        assert!((lb.trace_lower - d.trace_lower).abs() < 1e-15);
        assert!((lb.gap_lower - d.gap_lower).abs() < 1e-15);
    }
    assert!(dyadic_example(0).is_err());
}

#[test]
fn greedy_levels_are_chained_absorptions() {
    let schedule = [1.0, 0.5];
    let cert = greedy_sequence(2, &schedule).unwrap();
    assert!(cert.prefix.iter().all(|&a| (0.0..=1.0 + 1e-12).contains(&a)));
    let mut prev_size = 0;
    for (level, &tol) in cert.levels.iter().zip(&schedule) {
        assert!(level.kahan_defect <= tol);
        assert!(level.pairing_cost <= tol + 1e-12);
        assert!((level.upper_chain - (level.pairing_cost + level.kahan_defect)).abs() < 1e-15);
        assert_eq!(level.size, level.copies * level.kahan_order);

        // The level's diagonal is `copies` copies of σ(A_n): the new entries plus
        // a displaced image of the previous prefix.
        let mut pool: Vec<f64> = build_kahan(level.kahan_order).unwrap().a_eigenvalues().repeat(level.copies);
        pool.sort_by(f64::total_cmp);
        for &x in &cert.prefix[prev_size..level.size] {
            let i = pool.iter().position(|&y| y == x).expect("new entry is an eigenvalue of A_n");
            pool.remove(i);
        }
        let mut old = cert.prefix[..prev_size].to_vec();
        old.sort_by(f64::total_cmp);
        assert_eq!(old.len(), pool.len());
        let shift = old.iter().zip(&pool).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(shift <= level.pairing_cost + 1e-12, "{shift} > {}", level.pairing_cost);
        prev_size = level.size;
    }
}

#[test]
fn greedy_rejects_tolerances_below_the_ladder() {
    let tol = ladder_floor() * 0.9;
    assert!(matches!(greedy_sequence(2, &[1.0, tol]), Err(Error::LadderExhausted { level: 2, .. })));
    assert!(greedy_sequence(2, &[0.5, 1.0]).is_err());
}
