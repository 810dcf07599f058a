use lorentz_lab::kfunc::{
    k_commutation_ratio, k_curve, k_exact_l1_linf, k_lattice, k_lattice_with, BruteConfig, GridSpec, KMethod,
    KOptions, LatticeCouple, LatticeFunction, LatticeNorm,
};
use lorentz_lab::lorentz::{ExponentPair, MeasureSpace, ProductStepFunction, StepFunction};
use proptest::prelude::*;

fn plain(pairs: &[(f64, f64)]) -> LatticeFunction {
    LatticeFunction::Plain(StepFunction::from_pairs(pairs).unwrap())
}

fn atoms(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-2.0f64..2.0, 0.1f64..2.0), 1..=max)
        .prop_map(|v| v.into_iter().map(|(lv, m)| (10f64.powf(lv), m)).collect())
}

fn lorentz_couple() -> LatticeCouple {
    LatticeCouple::new(LatticeNorm::lorentz(2.0, 1.0).unwrap(), LatticeNorm::lebesgue(4.0).unwrap())
}

fn brute() -> KOptions {
    KOptions::with_method(KMethod::Brute)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exchange_of_roles(pairs in atoms(3), t in -1.5f64..1.5) {
        let f = plain(&pairs);
        let c = lorentz_couple();
        let s = 10f64.powf(t) * f.norm(&c.a0).unwrap() / f.norm(&c.a1).unwrap();
        let k = k_lattice_with(&f, &c.swapped(), s, &brute(), None).unwrap().value;
        let k_swapped = s * k_lattice_with(&f, &c, 1.0 / s, &brute(), None).unwrap().value;
        prop_assert!((k - k_swapped).abs() <= 1e-9 * k, "{} vs {}", k, k_swapped);
    }

    #[test]
    fn curve_shape(pairs in atoms(3)) {
        let f = plain(&pairs);
        let c = lorentz_couple();
        let curve = k_curve(&f, &c, GridSpec { count: 48, span_decades: 4.0 }, &brute()).unwrap();
        let [a0, a1] = curve.caps;
        let scale = a0;
        for w in curve.samples.windows(2) {
            let ([s0, k0], [s1, k1]) = (w[0], w[1]);
            prop_assert!(k1 >= k0 * (1.0 - 1e-12), "K decreases at {}", s1);
            prop_assert!(k1 / s1 <= k0 / s0 * (1.0 + 1e-12), "K/s increases at {}", s1);
        }
        for &[s, k] in &curve.samples {
            prop_assert!(k <= a0.min(s * a1) + 1e-12 * scale);
        }
        for w in curve.samples.windows(3) {
            // concavity along the secant through the outer points
            let ([s0, k0], [s1, k1], [s2, k2]) = (w[0], w[1], w[2]);
            let chord = k0 + (k2 - k0) * (s1 - s0) / (s2 - s0);
            prop_assert!(k1 >= chord - 1e-9 * scale, "not concave at {}", s1);
        }
    }

    #[test]
    fn single_x_atom_commutes_exactly(values in prop::collection::vec(0.01f64..10.0, 1..5), t in -1.0f64..1.0) {
        let y = MeasureSpace::discrete(vec![0.5; values.len()]).unwrap();
        let f = ProductStepFunction::new(MeasureSpace::discrete(vec![1.5]).unwrap(), y, values).unwrap();
        for (p, r) in [(2.0, 2.0), (2.0, 1.0), (0.5, 0.5)] {
            let c = k_commutation_ratio(&f, ExponentPair::new(p, r).unwrap(), &LatticeCouple::l1_linf(), 10f64.powf(t), &KOptions::default()).unwrap();
            prop_assert!((c.ratio - 1.0).abs() < 1e-9, "{}", c.ratio);
        }
    }
}

#[test]
fn coarse_error_shrinks_under_doubling() {
    let f = StepFunction::from_pairs(&[(3.1, 0.7), (1.3, 0.4), (0.45, 1.3)]).unwrap();
    let g = LatticeFunction::Plain(f.clone());
    for s in [0.3, 1.1, 2.0] {
        let exact = k_exact_l1_linf(&f, s);
        let mut last = f64::INFINITY;
        for resolution in [16, 32, 64] {
            let cfg = BruteConfig { resolution, budget: 1 << 20, refine: false, ..BruteConfig::default() };
            let opts = KOptions { brute: cfg, ..KOptions::with_method(KMethod::Brute) };
            let err = k_lattice_with(&g, &LatticeCouple::l1_linf(), s, &opts, None).unwrap().value - exact;
            assert!(err >= -1e-12 && err <= last + 1e-15, "s={s} resolution={resolution}: {err} after {last}");
            last = err;
        }
    }
}

#[test]
fn commutation_within_the_quasi_triangle_constant() {
    let x = MeasureSpace::discrete(vec![0.3, 1.0, 0.6]).unwrap();
    let y = MeasureSpace::discrete(vec![0.8, 0.2, 0.5]).unwrap();
    let f = ProductStepFunction::new(x, y, vec![1.0, 4.0, 0.2, 9.0, 0.1, 3.0, 2.0, 2.0, 0.5]).unwrap();
    for (p, r) in [(2.0, 2.0), (2.0, 1.0), (0.5, 0.5)] {
        let e = ExponentPair::new(p, r).unwrap();
        let c = e.quasi_triangle_constant();
        for s in [0.05, 0.3, 1.0, 4.0] {
            let k = k_commutation_ratio(&f, e, &LatticeCouple::l1_linf(), s, &KOptions::default()).unwrap();
            assert!(k.ratio >= 1.0 / c && k.ratio <= c, "({p},{r}) s={s}: {}", k.ratio);
        }
    }
}

#[test]
fn large_s_reaches_the_a0_cap() {
    let x = MeasureSpace::discrete(vec![0.5, 1.0]).unwrap();
    let y = MeasureSpace::discrete(vec![1.0, 0.25]).unwrap();
    let f = ProductStepFunction::new(x, y, vec![1.0, 3.0, 2.0, 0.5]).unwrap();
    let e = ExponentPair::new(2.0, 1.0).unwrap();
    let joint = LatticeCouple::joint(e, &LatticeCouple::l1_linf()).unwrap();
    let cap = LatticeFunction::Product(f.clone()).norm(&joint.a0).unwrap();
    let k = k_commutation_ratio(&f, e, &LatticeCouple::l1_linf(), 1e6, &KOptions::default()).unwrap();
    assert!((k.lhs - cap).abs() < 1e-12 * cap && (k.rhs - cap).abs() < 1e-9 * cap, "{} {} {cap}", k.lhs, k.rhs);
}

#[test]
fn auto_refuses_large_problems_without_heuristics() {
    let f = plain(&[(1.0, 1.0); 9].iter().enumerate().map(|(i, &(v, m))| (v + i as f64, m)).collect::<Vec<_>>());
    let opts = KOptions { allow_heuristic: false, ..KOptions::default() };
    let err = k_lattice_with(&f, &lorentz_couple(), 1.0, &opts, None);
    assert!(err.is_err());
    assert!(k_lattice(&f, &lorentz_couple(), 1.0, KMethod::Auto).is_ok());
}

#[test]
fn descent_tracks_brute_on_mixed_couples() {
    use lorentz_lab::embeddings::identity_instance;
    use lorentz_lab::lorentz::MixedExponents;
    let m = |p: f64| {
        MixedExponents::new(ExponentPair::new(p, 1.0).unwrap(), ExponentPair::new(p, 1.0).unwrap())
    };
    let c = LatticeCouple::new(LatticeNorm::mixed_lorentz(m(2.0)), LatticeNorm::mixed_lorentz(m(4.0)));
    let f = LatticeFunction::Product(identity_instance(7, 2, 0));
    let ratio = f.norm(&c.a0).unwrap() / f.norm(&c.a1).unwrap();
    for k in [-1.0, 0.0, 1.0] {
        let s = ratio * 10f64.powf(k * 0.5);
        let b = k_lattice_with(&f, &c, s, &brute(), None).unwrap().value;
        let d = k_lattice_with(&f, &c, s, &KOptions::with_method(KMethod::Descent), None).unwrap().value;
        assert!(d >= b * (1.0 - 1e-9) && d <= b * (1.0 + 1e-6), "s={s}: descent {d} brute {b}");
    }
}
