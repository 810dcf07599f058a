use lorentz_lab::embeddings::{
    cwikel_probe, identity_instance, identity_probe, identity_report, lemma61_ratio, log_convexity_probe,
    log_convexity_variant, IdentityKind, IdentityParams, ProbeConfig, Regime, RATIO_ONLY_NOTE,
};
use lorentz_lab::interp::InterpParams;
use lorentz_lab::kfunc::{KOptions, LatticeCouple};
use lorentz_lab::lorentz::{ExponentPair, MeasureSpace, ProductStepFunction, StepFunction};
use lorentz_lab::Error;
use proptest::prelude::*;

fn grid(max: usize) -> impl Strategy<Value = ProductStepFunction> {
    (1..=max, 1..=max).prop_flat_map(|(nx, ny)| {
        (
            prop::collection::vec(0.05f64..2.0, nx),
            prop::collection::vec(0.05f64..2.0, ny),
            prop::collection::vec(-3.0f64..3.0, nx * ny),
        )
            .prop_map(|(mx, my, lv)| {
                let values = lv.into_iter().map(|v| 10f64.powf(v)).collect();
                ProductStepFunction::new(MeasureSpace::discrete(mx).unwrap(), MeasureSpace::discrete(my).unwrap(), values)
                    .unwrap()
            })
    })
}

fn tensor_indicator(a: f64, b: f64) -> ProductStepFunction {
    ProductStepFunction::tensor(
        MeasureSpace::discrete(vec![a]).unwrap(),
        &[1.0],
        MeasureSpace::discrete(vec![b]).unwrap(),
        &[1.0],
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lemma61_diagonal_equality(f in grid(8), p in prop::sample::select(vec![0.25, 0.5, 1.0, 2.0, 3.5])) {
        let rep = lemma61_ratio(&f, ExponentPair::diagonal(p).unwrap());
        prop_assert!((rep.ratio - 1.0).abs() < 1e-12, "{}", rep.ratio);
    }

    #[test]
    fn log_convexity_scaling(f in grid(5), lv in -4.0f64..4.0, theta in 0.1f64..0.9) {
        let a = log_convexity_probe(&f, [1.0, 2.0], [3.0, 0.5], theta).unwrap();
        let b = log_convexity_probe(&f.scaled(10f64.powf(lv)).unwrap(), [1.0, 2.0], [3.0, 0.5], theta).unwrap();
        prop_assert!((a.ratio - b.ratio).abs() <= 1e-12 * a.ratio, "{} vs {}", a.ratio, b.ratio);
    }

    #[test]
    fn second_index_log_convexity(
        pairs in prop::collection::vec((-3.0f64..3.0, 0.05f64..2.0), 1..8),
        p in 0.25f64..4.0, r0 in 0.25f64..4.0, r1 in 0.25f64..4.0, theta in 0.05f64..0.95,
    ) {
        let pairs: Vec<(f64, f64)> = pairs.into_iter().map(|(lv, m)| (10f64.powf(lv), m)).collect();
        let u = StepFunction::from_pairs(&pairs).unwrap();
        let rep = log_convexity_variant(&u, p, r0, r1, theta).unwrap();
        prop_assert!(rep.ratio <= 1.0 + 1e-12, "{}", rep.ratio);
    }
}

#[test]
fn cwikel_diagonal_within_the_commutation_constant() {
    let cfg = ProbeConfig::default();
    for p in [1.0, 2.0] {
        let e = ExponentPair::diagonal(p).unwrap();
        let c = e.quasi_triangle_constant();
        for draw in 0..4 {
            let f = identity_instance(5, 3, draw);
            for regime in [Regime::I, Regime::II] {
                let rep = cwikel_probe(&f, e, InterpParams::new(0.5, p).unwrap(), &LatticeCouple::l1_linf(), regime, &cfg)
                    .unwrap();
                assert!(rep.ratio >= 1.0 / c && rep.ratio <= c, "p={p} draw={draw}: {}", rep.ratio);
                assert!(!rep.flags.iter().any(|f| f == "heuristic"));
            }
        }
    }
    let rep = cwikel_probe(
        &tensor_indicator(2.0, 3.0),
        ExponentPair::diagonal(2.0).unwrap(),
        InterpParams::new(0.5, 2.0).unwrap(),
        &LatticeCouple::l1_linf(),
        Regime::I,
        &cfg,
    )
    .unwrap();
    // exactly 1 in the continuum; the joint curve is sampled, not kink-exact
    let c = ExponentPair::diagonal(2.0).unwrap().quasi_triangle_constant();
    assert!(rep.ratio >= 1.0 / c && rep.ratio <= c && (rep.ratio - 1.0).abs() < 1e-2, "{}", rep.ratio);
}

#[test]
fn cwikel_rejects_the_wrong_regime_and_flags_zero() {
    let cfg = ProbeConfig::default();
    let f = identity_instance(5, 2, 0);
    let e = ExponentPair::new(1.0, 1.0).unwrap();
    let ip = InterpParams::new(0.5, 2.0).unwrap();
    let err = cwikel_probe(&f, e, ip, &LatticeCouple::l1_linf(), Regime::I, &cfg).unwrap_err();
    assert!(matches!(err, Error::Hypothesis(_)));
    assert!(cwikel_probe(&f, e, ip, &LatticeCouple::l1_linf(), Regime::II, &cfg).is_ok());
    let zero = ProductStepFunction::new(MeasureSpace::counting(2), MeasureSpace::counting(2), vec![0.0; 4]).unwrap();
    let rep = cwikel_probe(&zero, e, ip, &LatticeCouple::l1_linf(), Regime::II, &cfg).unwrap();
    assert_eq!((rep.lhs, rep.rhs), (0.0, 0.0));
    assert!(rep.is_degenerate());
}

#[test]
fn identity_ratio_ignores_scaling_and_atom_order() {
    let cfg = ProbeConfig::default();
    let params = IdentityParams::corollary(2.0, 4.0, 1.0, 2.0, 0.5);
    let f = identity_instance(7, 2, 3);
    let base = identity_report(IdentityKind::Corollary12, &params, &f, &cfg).unwrap();
    let scaled = identity_report(IdentityKind::Corollary12, &params, &f.scaled(37.5).unwrap(), &cfg).unwrap();
    let permuted = identity_report(IdentityKind::Corollary12, &params, &f.permuted(&[1, 0], &[1, 0]).unwrap(), &cfg).unwrap();
    assert!((scaled.ratio - base.ratio).abs() < 1e-9 * base.ratio, "{} vs {}", scaled.ratio, base.ratio);
    assert!((permuted.ratio - base.ratio).abs() < 1e-9 * base.ratio, "{} vs {}", permuted.ratio, base.ratio);
    assert!(base.discretization["note"].as_str().unwrap() == RATIO_ONLY_NOTE);
}

#[test]
fn identity_tensor_indicator_is_finite() {
    let cfg = ProbeConfig::default();
    let rep = identity_report(
        IdentityKind::Corollary12,
        &IdentityParams::corollary(2.0, 4.0, 1.0, 2.0, 0.5),
        &tensor_indicator(1.5, 0.5),
        &cfg,
    )
    .unwrap();
    assert!(rep.ratio.is_finite() && rep.ratio > 0.0, "{}", rep.ratio);
}

#[test]
fn identity_batches_are_reproducible_and_guarded() {
    let cfg = ProbeConfig::default();
    let params = IdentityParams::corollary(2.0, 4.0, 1.0, 2.0, 0.5);
    let a = identity_probe(IdentityKind::Corollary12, &params, &[2], 3, 7, &cfg).unwrap();
    let b = identity_probe(IdentityKind::Corollary12, &params, &[2], 3, 7, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.iter().map(|r| r.instance.draw.unwrap()).collect::<Vec<_>>(), vec![0, 1, 2]);
    let strict = ProbeConfig { k: KOptions { allow_heuristic: false, ..cfg.k }, ..cfg };
    let err = identity_probe(IdentityKind::Corollary12, &params, &[3], 1, 7, &strict).unwrap_err();
    assert!(matches!(err, Error::TooManyAtoms { .. }), "{err}");
    for theta in [0.0, 1.0] {
        let bad = IdentityParams { theta, ..params };
        assert!(identity_probe(IdentityKind::Corollary12, &bad, &[2], 1, 7, &cfg).is_err());
    }
}

#[test]
fn chen_sun_tensor_indicator_and_zero() {
    let rep = log_convexity_probe(&tensor_indicator(2.0, 7.0), [1.0, 1.0], [3.0, 3.0], 0.5).unwrap();
    assert!(rep.ratio.is_finite());
    assert!(log_convexity_probe(&tensor_indicator(2.0, 7.0), [1.0, 1.0], [1.0, 3.0], 0.5).is_err());
    let zero = ProductStepFunction::new(MeasureSpace::counting(1), MeasureSpace::counting(3), vec![0.0; 3]).unwrap();
    assert!(log_convexity_probe(&zero, [1.0, 1.0], [3.0, 3.0], 0.5).unwrap().is_degenerate());
}
