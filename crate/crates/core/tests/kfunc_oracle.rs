use lorentz_lab::kfunc::{k_exact_l1_linf, k_lattice, KMethod, LatticeCouple, LatticeFunction};
use lorentz_lab::lorentz::StepFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(rng: &mut ChaCha8Rng) -> (StepFunction, f64) {
    let n = rng.gen_range(1..=6);
    let pairs: Vec<(f64, f64)> =
        (0..n).map(|_| (10f64.powf(rng.gen_range(-2.0..2.0)), rng.gen_range(0.1..2.0))).collect();
    let f = StepFunction::from_pairs(&pairs).unwrap();
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    let s = total * 10f64.powf(rng.gen_range(-1.5..0.5));
    (f, s)
}

#[test]
fn brute_and_descent_match_the_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let couple = LatticeCouple::l1_linf();
    let (mut worst_b, mut worst_d) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let (f, s) = instance(&mut rng);
        let exact = k_exact_l1_linf(&f, s);
        let g = LatticeFunction::from(f);
        let b = k_lattice(&g, &couple, s, KMethod::Brute).unwrap();
        let d = k_lattice(&g, &couple, s, KMethod::Descent).unwrap();
        worst_b = worst_b.max((b - exact).abs() / exact);
        worst_d = worst_d.max((d - b) / b);
    }
    println!("brute vs exact {worst_b:e}, descent above brute {worst_d:e}");
    assert!(worst_b < 1e-3);
    assert!(worst_d < 1e-6);
}
