use lorentz_lab::lorentz::{ExponentPair, MeasureSpace, ProductStepFunction};
use lorentz_lab::minkowski::{
    family_eval, family_eval_refined, minkowski_ratio, sweep_cell, sweep_plane, Classification, Direction,
    Discretization, FamilyParams, PlaneGrid, SampleSpec,
};
use proptest::prelude::*;

fn grid(max: usize) -> impl Strategy<Value = ProductStepFunction> {
    (1..=max, 1..=max).prop_flat_map(|(nx, ny)| {
        (
            prop::collection::vec(0.05f64..2.0, nx),
            prop::collection::vec(0.05f64..2.0, ny),
            prop::collection::vec(prop_oneof![Just(0.0), -3.0f64..3.0], nx * ny),
        )
            .prop_map(|(mx, my, lv)| {
                let values = lv.into_iter().map(|v| if v == 0.0 { 0.0 } else { 10f64.powf(v) }).collect();
                ProductStepFunction::new(MeasureSpace::discrete(mx).unwrap(), MeasureSpace::discrete(my).unwrap(), values)
                    .unwrap()
            })
    })
}

fn exponent() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensors_give_ratio_one(
        a in prop::collection::vec(0.01f64..10.0, 1..5),
        b in prop::collection::vec(0.01f64..10.0, 1..5),
        p in exponent(), r in exponent(),
    ) {
        let x = MeasureSpace::discrete(vec![0.7; a.len()]).unwrap();
        let y = MeasureSpace::discrete(vec![0.3; b.len()]).unwrap();
        let f = ProductStepFunction::tensor(x, &a, y, &b).unwrap();
        let v = minkowski_ratio(&f, ExponentPair::new(p, r).unwrap());
        prop_assert!((v.ratio - 1.0).abs() < 1e-12, "{}", v.ratio);
    }

    #[test]
    fn diagonal_forward_at_least_one(f in grid(5), p in prop::sample::select(vec![1.0, 1.5, 2.0, 4.0])) {
        let v = minkowski_ratio(&f, ExponentPair::diagonal(p).unwrap());
        prop_assert!(v.ratio <= 1.0 + 1e-12, "{}", v.ratio);
    }

    #[test]
    fn diagonal_reverse_below_one(f in grid(5), p in prop::sample::select(vec![0.25, 0.5, 0.75, 1.0])) {
        let v = minkowski_ratio(&f, ExponentPair::diagonal(p).unwrap());
        prop_assert!(v.ratio >= 1.0 - 1e-12, "{}", v.ratio);
    }

    #[test]
    fn f41_closed_form(p in 0.5f64..4.0, frac in 0.01f64..0.99, r in prop::sample::select(vec![0.5, 1.0, 2.0, 3.0])) {
        let alpha = p * (1.0 - frac);
        let v = family_eval(FamilyParams::F41 { alpha }, ExponentPair::new(p, r).unwrap()).unwrap();
        let expected = (p - alpha).powf(1.0 - 1.0 / r) * p.powf(1.0 / r - 1.0);
        prop_assert!((v.ratio - expected).abs() <= 1e-12 * expected);
    }
}

#[test]
fn f42_power_law() {
    for p in [0.5f64, 2.0] {
        for n in [2u64, 4, 8, 16] {
            let v = family_eval(FamilyParams::F42 { n }, ExponentPair::new(p, 1.5).unwrap()).unwrap();
            let expected = (n as f64).powf(1.0 / p - 1.0);
            assert!((v.ratio - expected).abs() <= 1e-12 * expected, "p={p} N={n}: {}", v.ratio);
        }
    }
}

#[test]
fn translated_phi_trends() {
    let disc = Discretization::default();
    let e = ExponentPair::new(1.0, 2.0).unwrap();
    let up: Vec<f64> = (6..=8)
        .map(|k| family_eval(FamilyParams::F43 { n: 1 << k, beta: 0.75, disc }, e).unwrap().ratio)
        .collect();
    assert!(up.windows(2).all(|w| w[1] > w[0]), "{up:?}");
    let e = ExponentPair::new(1.0, 0.5).unwrap();
    let down: Vec<f64> = [10, 12]
        .iter()
        .map(|k| family_eval(FamilyParams::F44 { n: 1 << k, beta: 2.05, disc }, e).unwrap().ratio)
        .collect();
    assert!(down[1] < down[0] && down[0] < 1.0, "{down:?}");
}

#[test]
fn f43_refinement_is_small() {
    let v = family_eval_refined(
        FamilyParams::F43 { n: 64, beta: 0.75, disc: Discretization::default() },
        ExponentPair::new(1.0, 2.0).unwrap(),
    )
    .unwrap();
    assert!(v.refinement_delta.unwrap() < 0.01, "{:?}", v.refinement_delta);
}

#[test]
fn family_hypotheses_are_enforced() {
    let e = ExponentPair::new(1.0, 2.0).unwrap();
    assert!(family_eval(FamilyParams::F41 { alpha: 1.0 }, e).is_err());
    let disc = Discretization::default();
    assert!(family_eval(FamilyParams::F43 { n: 4, beta: 0.4, disc }, e).is_err());
    assert!(family_eval(FamilyParams::F43 { n: 4, beta: 1.2, disc }, e).is_err());
    assert!(family_eval(FamilyParams::F42 { n: 0 }, e).is_err());
}

fn row(ev: &lorentz_lab::minkowski::CellEvidence, d: Direction) -> &lorentz_lab::minkowski::CellResult {
    ev.rows.iter().find(|r| r.direction == d).unwrap()
}

#[test]
fn named_cells() {
    let spec = SampleSpec { instances: 8, ..SampleSpec::default() };
    let ev = sweep_cell(2.0, 2.0, 0, &spec, 1);
    let fw = row(&ev, Direction::Forward);
    assert_eq!(fw.classification, Classification::Holds);
    assert!(fw.extreme_ratio <= 1.0 + 1e-12);
    let ev = sweep_cell(1.0, 2.0, 1, &spec, 1);
    assert_eq!(row(&ev, Direction::Forward).classification, Classification::FailsEvidence);
    let ev = sweep_cell(0.5, 0.5, 2, &spec, 1);
    assert_eq!(row(&ev, Direction::Reverse).classification, Classification::Holds);
}

#[test]
fn sweep_is_reproducible() {
    let grid = PlaneGrid::parse("p=0.5:2:0.5,r=0.5:2:0.5").unwrap();
    let spec = SampleSpec { instances: 4, sizes: vec![4, 8], ..SampleSpec::default() };
    let a = sweep_plane(&grid, &spec, 9);
    let b = sweep_plane(&grid, &spec, 9);
    assert_eq!(a, b);
    assert!(a.all_consistent());
}
