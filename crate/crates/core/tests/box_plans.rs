use nilprox_core::boxes::{
    articulation_points, boxify, good_boxes, is_connected, plan, synth_pair, validate_plan, BoxSet, GridBox,
};
use nilprox_core::linalg::{spectrum, CertifiedNilpotent};
use nilprox_core::uhf_tower::polar_spectrum;
use proptest::prelude::*;
use std::collections::BTreeSet;

/// Grows a connected set from the origin by attaching random neighbors.
fn connected_set() -> impl Strategy<Value = BTreeSet<GridBox>> {
    proptest::collection::vec((0usize..64, 0usize..8), 0..24).prop_map(|moves| {
        let mut set = BTreeSet::from([GridBox::ORIGIN]);
        for (pick, dir) in moves {
            let anchor = *set.iter().nth(pick % set.len()).unwrap();
            let nb = anchor.neighbors().nth(dir).unwrap();
            set.insert(nb);
        }
        set
    })
}

fn brute_force_good(set: &BTreeSet<GridBox>) -> BTreeSet<GridBox> {
    set.iter()
        .filter(|&&b| b != GridBox::ORIGIN)
        .filter(|&&b| {
            let mut rest = set.clone();
            rest.remove(&b);
            is_connected(&rest)
        })
        .copied()
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn plans_validate_and_end_at_origin(set in connected_set()) {
        let bs = BoxSet::new(1.0, set.clone()).unwrap();
        let p = plan(&bs);
        prop_assert_eq!(p.steps.len(), set.len() - 1);
        prop_assert!(validate_plan(&bs, &p).is_ok());
        let removed: BTreeSet<GridBox> = p.steps.iter().map(|s| s.removed).collect();
        prop_assert_eq!(removed.len(), set.len() - 1);
        prop_assert!(!removed.contains(&GridBox::ORIGIN));
    }

    #[test]
    fn good_boxes_match_brute_force(set in connected_set()) {
        let bs = BoxSet::new(1.0, set.clone()).unwrap();
        prop_assert_eq!(good_boxes(&bs), brute_force_good(&set));
        let cut = articulation_points(&set);
        for b in &set {
            let mut rest = set.clone();
            rest.remove(b);
            prop_assert_eq!(cut.contains(b), !is_connected(&rest));
        }
    }

    #[test]
    fn boxes_contain_their_points(re in -3.0f64..3.0, im in -3.0f64..3.0, eps in 0.1f64..2.0) {
        let z = nilprox_core::Complex64::new(re, im);
        let c = GridBox::containing(z, eps).center(eps);
        prop_assert!((z.re - c.re).abs() <= eps / 2.0 + 1e-12);
        prop_assert!((z.im - c.im).abs() <= eps / 2.0 + 1e-12);
    }
}

#[test]
fn tampered_plans_are_rejected() {
    let set: BTreeSet<GridBox> = [(0, 0), (1, 0), (2, 0)].map(|(a, b)| GridBox(a, b)).into();
    let bs = BoxSet::new(1.0, set).unwrap();
    let mut p = plan(&bs);
    assert_eq!(p.steps[0].removed, GridBox(2, 0));
    p.steps.swap(0, 1);
    assert!(validate_plan(&bs, &p).is_err());
    assert!(BoxSet::new(1.0, [GridBox(3, 0)]).is_err());
}

#[test]
fn synthesized_spectrum_is_the_center_set() {
    let sets: [&[(i64, i64)]; 3] = [&[(0, 0), (1, 0)], &[(0, 0), (1, 0), (1, 1)], &[(0, 0), (-1, 1), (0, 1), (1, 1)]];
    for v in sets {
        let bs = BoxSet::new(0.5, v.iter().map(|&(a, b)| GridBox(a, b))).unwrap();
        let pair = synth_pair(&bs, 16).unwrap();
        let n = pair.normal().unwrap();
        let spec = spectrum(&n, true).unwrap();
        for c in bs.centers() {
            assert!(spec.contains(c, 1e-8), "{v:?}: center {c} missing");
        }
        for p in spec.points() {
            assert!(bs.centers().iter().any(|c| (c - p.value).norm() < 1e-8), "{v:?}: stray {}", p.value);
        }
        let m: CertifiedNilpotent = pair.nilpotent().unwrap();
        assert_eq!(m.dim(), n.dim());
        let direct = nilprox_core::linalg::op_norm(&(&n - m.materialized()));
        assert!((direct - pair.defect()).abs() < 1e-9, "{direct} vs {}", pair.defect());
    }
}

#[test]
fn polar_target_defect_decreases_along_the_ladder() {
    let bs = boxify(&polar_spectrum(4, 4, 0).unwrap(), 0.5).unwrap();
    assert_eq!(bs.len(), 13);
    let defects: Vec<f64> = [64, 128, 256].iter().map(|&ell| synth_pair(&bs, ell).unwrap().defect()).collect();
    assert!(defects.windows(2).all(|w| w[1] <= w[0]), "{defects:?}");
}
