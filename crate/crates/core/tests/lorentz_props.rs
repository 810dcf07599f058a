use lorentz_lab::lorentz::{
    lebesgue_norm, lorentz_norm, mixed_lorentz_norm, rearrangement, ExponentPair, MeasureSpace,
    MixedExponents, ProductStepFunction, StepFunction,
};
use proptest::prelude::*;

/// Independent evaluation by summing over the gaps between consecutive values:
/// `Σ_j (v_j^r − v_{j+1}^r)/r · M_j^{r/p}`, unscaled.
fn oracle(values: &[f64], masses: &[f64], p: f64, r: f64) -> f64 {
    let mut pairs: Vec<(f64, f64)> = values.iter().copied().zip(masses.iter().copied()).filter(|x| x.0 > 0.0).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut cum = 0.0;
    let mut total = 0.0;
    let mut sup: f64 = 0.0;
    for (k, &(v, m)) in pairs.iter().enumerate() {
        cum += m;
        let next = pairs.get(k + 1).map_or(0.0, |x| x.0);
        if r.is_infinite() {
            sup = sup.max(v * cum.powf(1.0 / p));
        } else {
            total += (v.powf(r) - next.powf(r)) / r * cum.powf(r / p);
        }
    }
    if r.is_infinite() {
        sup
    } else {
        total.powf(1.0 / r)
    }
}

fn exponent() -> impl Strategy<Value = ExponentPair> {
    (0.2f64..5.0, prop_oneof![3 => 0.2f64..5.0, 1 => Just(f64::INFINITY)])
        .prop_map(|(p, r)| ExponentPair::new(p, r).unwrap())
}

fn atoms(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (prop::collection::vec(0.0f64..10.0, 1..=n), prop::collection::vec(0.01f64..3.0, n))
        .prop_map(|(v, m)| {
            let k = v.len();
            (v, m[..k].to_vec())
        })
}

fn step(values: &[f64], masses: &[f64]) -> StepFunction {
    StepFunction::from_atoms(MeasureSpace::discrete(masses.to_vec()).unwrap(), values).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs())
    }
}

proptest! {
    #[test]
    fn agrees_with_gap_summation((v, m) in atoms(12), e in exponent()) {
        let n = lorentz_norm(&step(&v, &m), e);
        prop_assert!(rel(n, oracle(&v, &m, e.p(), e.r())) < 1e-11);
    }

    #[test]
    fn homogeneity((v, m) in atoms(10), e in exponent(), lambda in 1e-3f64..1e3) {
        let f = step(&v, &m);
        let scaled = lorentz_norm(&f.scaled(lambda).unwrap(), e);
        prop_assert!(rel(scaled, lambda * lorentz_norm(&f, e)) < 1e-12);
    }

    #[test]
    fn monotonicity((v, m) in atoms(10), extra in prop::collection::vec(0.0f64..2.0, 10), e in exponent()) {
        let bigger: Vec<f64> = v.iter().zip(&extra).map(|(a, b)| a + b).collect();
        prop_assert!(lorentz_norm(&step(&v, &m), e) <= lorentz_norm(&step(&bigger, &m), e) * (1.0 + 1e-14));
    }

    #[test]
    fn rearrangement_invariance((v, m) in atoms(10), e in exponent()) {
        let f = step(&v, &m);
        prop_assert_eq!(lorentz_norm(&f, e), lorentz_norm(&rearrangement(&f), e));
    }

    #[test]
    fn quasi_triangle((v, m) in atoms(10), w in prop::collection::vec(0.0f64..10.0, 10), e in exponent()) {
        let g: Vec<f64> = w[..v.len()].to_vec();
        let sum: Vec<f64> = v.iter().zip(&g).map(|(a, b)| a + b).collect();
        let lhs = lorentz_norm(&step(&sum, &m), e);
        let rhs = e.quasi_triangle_constant() * (lorentz_norm(&step(&v, &m), e) + lorentz_norm(&step(&g, &m), e));
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn lebesgue_consistency((v, m) in atoms(12), p in 0.2f64..6.0) {
        let f = step(&v, &m);
        let e = ExponentPair::diagonal(p).unwrap();
        prop_assert!(rel(lorentz_norm(&f, e), p.powf(-1.0 / p) * lebesgue_norm(&f, p)) < 1e-12);
    }

    #[test]
    fn mixed_equals_plain_on_the_diagonal(
        nx in 1usize..5, ny in 1usize..5,
        grid in prop::collection::vec(0.0f64..5.0, 16),
        mx in prop::collection::vec(0.1f64..2.0, 4), my in prop::collection::vec(0.1f64..2.0, 4),
        p in 0.3f64..5.0,
    ) {
        let x = MeasureSpace::discrete(mx[..nx].to_vec()).unwrap();
        let y = MeasureSpace::discrete(my[..ny].to_vec()).unwrap();
        let f = ProductStepFunction::new(x, y, grid[..nx * ny].to_vec()).unwrap();
        let e = ExponentPair::diagonal(p).unwrap();
        let mixed = mixed_lorentz_norm(&f, MixedExponents::new(e, e));
        let plain = p.powf(-2.0 / p) * lebesgue_norm(&f.flatten(), p);
        prop_assert!(rel(mixed, plain) < 1e-12);
    }
}

#[test]
fn mixed_tensor_indicator() {
    let f = ProductStepFunction::tensor(
        MeasureSpace::discrete(vec![4.0]).unwrap(),
        &[1.0],
        MeasureSpace::discrete(vec![9.0]).unwrap(),
        &[1.0],
    )
    .unwrap();
    let m = MixedExponents::new(ExponentPair::new(2.0, 1.0).unwrap(), ExponentPair::new(2.0, 2.0).unwrap());
    let expected = 6.0 / 2f64.sqrt();
    assert!(rel(mixed_lorentz_norm(&f, m), expected) < 1e-15);
    let zero = ProductStepFunction::new(MeasureSpace::counting(2), MeasureSpace::counting(2), vec![0.0; 4]).unwrap();
    assert_eq!(mixed_lorentz_norm(&zero, m), 0.0);
}

#[test]
fn normability_table() {
    let inf = f64::INFINITY;
    assert!(ExponentPair::new(2.0, 1.0).unwrap().is_normable());
    assert!(!ExponentPair::new(1.0, 2.0).unwrap().is_normable());
    assert!(ExponentPair::new(inf, inf).unwrap().is_normable());
    assert!(ExponentPair::new(inf, 2.0).is_err());
}
