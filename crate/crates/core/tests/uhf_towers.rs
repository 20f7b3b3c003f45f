use nilprox_core::linalg::{op_norm, Spectrum};
use nilprox_core::uhf_tower::{
    bookkeeping, bottleneck_match_values, build_tower, embed_diagonal, is_inflation, polar_spectrum, Ratio,
};
use nilprox_core::Complex64;
use proptest::prelude::*;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn brute_force_bottleneck(a: &[Complex64], b: &[Complex64]) -> f64 {
    permutations(a.len())
        .iter()
        .map(|p| p.iter().enumerate().map(|(i, &j)| (a[i] - b[j]).norm()).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

fn points(max: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec((-4i32..=4, -4i32..=4), max)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a as f64 / 4.0, b as f64 / 4.0)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matcher_equals_brute_force(n in 1usize..=7, seed_a in points(7), seed_b in points(7)) {
        let (a, b) = (&seed_a[..n], &seed_b[..n]);
        let m = bottleneck_match_values(a, b).unwrap();
        let mut cols: Vec<usize> = m.pairs.iter().map(|p| p.1).collect();
        cols.sort();
        prop_assert_eq!(cols, (0..n).collect::<Vec<_>>());
        prop_assert!((m.cost - brute_force_bottleneck(a, b)).abs() < 1e-12);
    }

    #[test]
    fn bookkeeping_identity_holds(ell1 in 11u64..200, ratios in proptest::collection::vec((2u64..5, 2u64..5), 0..4)) {
        let rs: Vec<Ratio> = ratios.iter().map(|&(p, z)| Ratio::new(p, z).unwrap()).collect();
        let shapes = bookkeeping(ell1, &rs).unwrap();
        prop_assert_eq!(shapes[0].m, 2);
        prop_assert!(shapes[0].q < 5);
        for (k, s) in shapes.iter().enumerate() {
            prop_assert!(s.identity_holds(), "level {}: {:?}", k, s);
            if s.ell <= 20_000 {
                let spec = polar_spectrum(s.n, s.m, s.q).unwrap();
                prop_assert_eq!(spec.total_multiplicity() as u64, s.ell);
            }
        }
        for (w, r) in shapes.windows(2).zip(&rs) {
            prop_assert_eq!(w[1].ell, w[0].ell * r.value());
        }
    }
}

#[test]
fn embedding_inflates_multiplicities_exactly() {
    let spec = polar_spectrum(3, 2, 1).unwrap();
    let diag = spec.expand();
    for r in [1, 2, 4, 6] {
        assert!(is_inflation(&spec, &embed_diagonal(&diag, r), r));
    }
    let mut broken = embed_diagonal(&diag, 2);
    broken[0] += Complex64::new(1e-3, 0.0);
    assert!(!is_inflation(&spec, &broken, 2));
}

#[test]
fn increments_equal_pairing_costs_and_respect_the_bound() {
    let r = Ratio::new(2, 2).unwrap();
    let tower = build_tower(&bookkeeping(12, &[r, r]).unwrap()).unwrap();
    for pair in tower.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        let embedded = embed_diagonal(&prev.diagonal, (cur.shape.ell / prev.shape.ell) as usize);
        let direct = op_norm(&(&cur.normal() - &nilprox_core::ComplexMatrix::from_diagonal(&embedded)));
        assert!((direct - cur.increment.unwrap()).abs() < 1e-12);
        assert!((cur.increment.unwrap() - cur.pairing_cost.unwrap()).abs() < 1e-15);
        assert!(cur.within_bound(), "level {}: {:?} > {:?}", cur.k, cur.pairing_cost, cur.paper_bound);
        let spec = Spectrum::from_values(&cur.diagonal, 1e-12);
        assert!(spec.approx_eq(&cur.spec, 1e-12));
    }
}
