use maxmod::opnorm::{cube_opnorm_holder_closed, cube_value, euclid_value, l1_linf_identity_check};
use maxmod::oracle::*;
use maxmod::{ModulusSpec, NormKind};
use proptest::prelude::*;

fn samples() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0f64, 5..60)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn maximal_functions_are_ordered(v in samples()) {
        let f = GridFunction::interval(0.0, 1.0, v).unwrap();
        let m = grid_max_uncentered_1d(&f).unwrap();
        let c = grid_max_centered_1d(&f).unwrap();
        let all = grid_max_all_intervals_1d(&f).unwrap();
        for i in 0..f.n() {
            prop_assert!(m.values()[i] >= c.values()[i] - 1e-15);
            prop_assert!(c.values()[i] >= f.values()[i]);
            prop_assert!((m.values()[i] - all.values()[i]).abs() <= 1e-14);
        }
    }

    #[test]
    fn maximal_function_does_not_raise_the_sup(v in samples()) {
        let f = GridFunction::interval(-1.0, 1.0, v.clone()).unwrap();
        let m = grid_max_uncentered_1d(&f).unwrap();
        let top = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(m.values().iter().all(|&x| x <= top + 1e-15));
    }

    #[test]
    fn cube_objective_stays_below_one(alpha in 0.05..1.0f64, d in 1usize..12, s in 0.0..1.0f64) {
        let w = ModulusSpec::holder(alpha).unwrap();
        let v = cube_value(&w, d, 1.0, s).unwrap();
        prop_assert!(v > 0.0 && v <= 1.0 + 1e-12);
        let best = cube_opnorm_holder_closed(alpha, d).unwrap().value;
        prop_assert!(best <= v + 1e-9);
    }

    #[test]
    fn euclid_objective_stays_below_one(d in 2usize..8, r in 0.5..1.0f64, t in 0.05..5.0f64) {
        let w = ModulusSpec::capped_holder(0.7, 1.0).unwrap();
        let v = euclid_value(&w, d, t, r).unwrap();
        prop_assert!(v > 0.0 && v <= 1.0 + 1e-9, "{}", v);
    }

    #[test]
    fn identity_holds_for_random_scales(d in 2usize..5, r in 0.5..1.0f64, t in 0.1..3.0f64) {
        let w = ModulusSpec::capped_holder(0.5, 1.2).unwrap();
        let c = l1_linf_identity_check(&w, d, t, r).unwrap();
        prop_assert!(c.diff <= 1e-8, "{:?}", c);
    }
}

#[test]
fn box_maximal_function_of_a_constant_is_constant() {
    for norm in [NormKind::Linf, NormKind::L2, NormKind::L1] {
        let f = GridFunction::sample_box(&[0.0, 0.0], &[1.0, 1.0], 15, |_| 0.3).unwrap();
        let m = grid_max_box(&f, &norm).unwrap();
        assert!(m.max.values().iter().all(|v| (v - 0.3).abs() < 1e-14), "{}", norm.label());
    }
}

#[test]
fn csv_export_round_trips_through_a_file() {
    let dir = std::env::temp_dir().join(format!("maxmod-grid-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("hat.csv");
    let f = GridFunction::sample_interval(-1.0, 1.0, 33, |x| (1.0 - x.abs()).max(0.0)).unwrap();
    let m = grid_max_uncentered_1d(&f).unwrap();
    m.to_csv_path(&path).unwrap();
    let back = GridFunction::from_csv_path(&path).unwrap();
    assert_eq!(back.n(), 33);
    assert!(back.values().iter().zip(m.values()).all(|(a, b)| (a - b).abs() < 1e-15));
    std::fs::remove_dir_all(&dir).unwrap();
}
