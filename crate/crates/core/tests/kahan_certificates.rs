use nilprox_core::kahan::{build_kahan, density_check};
use nilprox_core::linalg::{eigvalsh, RealMatrix};

/// Dense reference for `‖A − W‖`: square root of the top eigenvalue of `EᵀE`.
fn dense_defect(n: usize) -> f64 {
    let pack = build_kahan(n).unwrap();
    let e = &pack.a_real() - &pack.witness_core_real();
    let gram = &e.transpose() * &e;
    let gram = RealMatrix::from_fn(n, |i, j| 0.5 * (gram[(i, j)] + gram[(j, i)]));
    eigvalsh(&gram).unwrap().last().copied().unwrap().max(0.0).sqrt()
}

#[test]
fn matrix_free_defect_matches_dense_reference() {
    for n in [16, 64, 256] {
        let fast = build_kahan(n).unwrap().witness_defect();
        let dense = dense_defect(n);
        assert!((fast - dense).abs() < 1e-9, "n = {n}: {fast} vs {dense}");
    }
}

#[test]
fn frozen_witness_defects() {
    // Dense reference values, frozen.
    for (n, value) in [(64, 0.550925), (256, 0.448562), (1024, 0.375901)] {
        let d = build_kahan(n).unwrap().witness_defect();
        assert!((d - value).abs() < 1e-6, "n = {n}: {d}");
    }
}

#[test]
fn frozen_norm_deviation() {
    let p = build_kahan(64).unwrap();
    assert!((p.h_norm_deviation - 0.083520).abs() < 1e-6);
    assert!(!p.checks.h_norm_near_one);
}

#[test]
fn certified_inequalities_at_small_orders() {
    for n in [2, 4, 8, 16, 32] {
        let p = build_kahan(n).unwrap();
        let [skew, near_one, close, contraction] = p.checks.as_array();
        assert!(skew && close && contraction, "n = {n}: {:?}", p.checks);
        assert!(near_one, "n = {n}: deviation {}", p.h_norm_deviation);
    }
}

#[test]
fn positive_part_has_unit_norm_and_lies_in_unit_interval() {
    for n in [2, 8, 64, 256] {
        let eigs = build_kahan(n).unwrap().a_eigenvalues();
        assert!(eigs[0] >= -1e-9);
        assert!((eigs.last().unwrap() - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn spectral_gaps_are_bounded_by_twice_the_defect() {
    for n in [16, 64, 256, 1024] {
        let p = build_kahan(n).unwrap();
        let mut pts = p.a_eigenvalues();
        pts.extend([0.0, 1.0]);
        pts.sort_by(f64::total_cmp);
        let gap = pts.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        assert!(gap <= 2.0 * p.witness_defect() + 1e-6, "n = {n}: gap {gap}");
    }
}

#[test]
fn density_onset_is_monotone_on_the_ladder() {
    let ladder = [64, 128, 256, 512, 1024];
    let holds: Vec<bool> = ladder.iter().map(|&n| density_check(n, 2).unwrap().holds).collect();
    let first = holds.iter().position(|&h| h).expect("m = 2 is reached on the ladder");
    assert!(holds[first..].iter().all(|&h| h), "{holds:?}");
}
