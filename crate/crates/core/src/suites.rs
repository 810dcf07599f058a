//! Golden verification suites. Each returns a per-case table; a suite passes
//! when every case does.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::embeddings::{identity_instance, lemma61_ratio};
use crate::interp::{gauss_legendre, interp_norm_of, interp_norm_with, lorentz_identity_ratio, InterpParams};
use crate::kfunc::{
    k_commutation_ratio, k_curve, k_exact_l1_linf, k_lattice, GridSpec, KMethod, KOptions, LatticeCouple,
    LatticeFunction,
};
use crate::lorentz::{
    lebesgue_norm, lorentz_norm, mixed_lorentz_norm, ExponentPair, MeasureSpace, MixedExponents,
    ProductStepFunction, StepFunction,
};
use crate::minkowski::{family_eval, FamilyParams};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    ClosedForms,
    KOracle,
    Commutation,
    Lemma61,
    Quadrature,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::ClosedForms, Suite::KOracle, Suite::Commutation, Suite::Lemma61, Suite::Quadrature];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::ClosedForms => "closed-forms",
            Suite::KOracle => "k-oracle",
            Suite::Commutation => "commutation",
            Suite::Lemma61 => "lemma61",
            Suite::Quadrature => "quadrature",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite '{s}'")))
    }
}

/// One checked quantity. `deviation` is a relative error for equality checks
/// and, for bound checks, the factor by which the nearer bound is reached.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteCase {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl SuiteCase {
    pub fn relative(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64) -> Self {
        let deviation = if observed == expected {
            0.0
        } else if expected == 0.0 {
            observed.abs()
        } else {
            ((observed - expected) / expected).abs()
        };
        Self { name: name.into(), observed, expected, deviation, tolerance, pass: deviation <= tolerance }
    }

    /// `lo ≤ observed ≤ hi`; `expected` holds `hi`.
    pub fn within(name: impl Into<String>, observed: f64, lo: f64, hi: f64) -> Self {
        let deviation = (observed / hi).max(lo / observed);
        Self { name: name.into(), observed, expected: hi, deviation, tolerance: 1.0, pass: deviation <= 1.0 }
    }

    /// `observed ≤ bound·(1 + tolerance)`.
    pub fn at_most(name: impl Into<String>, observed: f64, bound: f64, tolerance: f64) -> Self {
        let deviation = ((observed - bound) / bound).max(0.0);
        Self { name: name.into(), observed, expected: bound, deviation, tolerance, pass: deviation <= tolerance }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<SuiteCase>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteCase> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn worst_deviation(&self) -> f64 {
        self.cases.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }

    /// Fixed-width table, one row per case.
    pub fn table(&self) -> String {
        use crate::report::fmt_sig;
        let w = self.cases.iter().map(|c| c.name.len()).max().unwrap_or(4).max(4);
        let mut out = format!(
            "{:<w$}  {:>20}  {:>20}  {:>10}  {:>9}  status\n",
            "case", "observed", "expected", "deviation", "tolerance"
        );
        for c in &self.cases {
            out.push_str(&format!(
                "{:<w$}  {:>20}  {:>20}  {:>10}  {:>9}  {}\n",
                c.name,
                fmt_sig(c.observed, 15),
                fmt_sig(c.expected, 15),
                fmt_sig(c.deviation, 3),
                fmt_sig(c.tolerance, 3),
                if c.pass { "ok" } else { "FAIL" }
            ));
        }
        out
    }
}

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let cases = match suite {
        Suite::ClosedForms => closed_forms()?,
        Suite::KOracle => k_oracle()?,
        Suite::Commutation => commutation()?,
        Suite::Lemma61 => lemma61()?,
        Suite::Quadrature => quadrature()?,
    };
    Ok(SuiteReport { suite: suite.as_str().into(), cases })
}

const GOLDEN_TOL: f64 = 1e-12;

fn pair(p: f64, r: f64) -> Result<ExponentPair> {
    ExponentPair::new(p, r)
}

/// `‖1_E‖_{p,r} = r^{-1/r} μ(E)^{1/p}`, with `r^{-1/r} = 1` at `r = ∞`.
fn indicator_norm(m: f64, p: f64, r: f64) -> f64 {
    let c = if r.is_infinite() { 1.0 } else { r.powf(-1.0 / r) };
    c * m.powf(1.0 / p)
}

fn closed_forms() -> Result<Vec<SuiteCase>> {
    let mut out = Vec::new();
    for (m, p, r) in [(3.0, 2.0, 1.0), (0.5, 0.5, 3.0), (2.0, 4.0, f64::INFINITY), (7.0, 1.5, 0.25)] {
        let got = lorentz_norm(&StepFunction::indicator(m)?, pair(p, r)?);
        out.push(SuiteCase::relative(format!("indicator m={m} p={p} r={r}"), got, indicator_norm(m, p, r), GOLDEN_TOL));
    }
    let two = StepFunction::from_pairs(&[(2.0, 1.0), (1.0, 1.0)])?;
    out.push(SuiteCase::relative("two-level (1,1)", lorentz_norm(&two, pair(1.0, 1.0)?), 3.0, GOLDEN_TOL));
    // a > b on masses m1, m2: ‖f‖^r = (a^r m1^{r/p} + b^r((m1+m2)^{r/p} − m1^{r/p}))/r
    let (a, b, m1, m2, p, r) = (5.0f64, 2.0f64, 0.5f64, 1.5f64, 3.0f64, 2.0f64);
    let expected = ((a.powf(r) * m1.powf(r / p) + b.powf(r) * ((m1 + m2).powf(r / p) - m1.powf(r / p))) / r).powf(1.0 / r);
    let got = lorentz_norm(&StepFunction::from_pairs(&[(b, m2), (a, m1)])?, pair(p, r)?);
    out.push(SuiteCase::relative("two-level (3,2)", got, expected, GOLDEN_TOL));
    for (ma, mb, o, i) in [(2.0, 3.0, (2.0, 2.0), (2.0, 1.0)), (0.5, 4.0, (1.0, 3.0), (0.5, 2.0))] {
        let f = ProductStepFunction::tensor(
            MeasureSpace::discrete(vec![ma])?,
            &[1.0],
            MeasureSpace::discrete(vec![mb])?,
            &[1.0],
        )?;
        let got = mixed_lorentz_norm(&f, MixedExponents::new(pair(o.0, o.1)?, pair(i.0, i.1)?));
        let expected = indicator_norm(ma, o.0, o.1) * indicator_norm(mb, i.0, i.1);
        out.push(SuiteCase::relative(format!("mixed tensor {ma}x{mb}"), got, expected, GOLDEN_TOL));
    }
    for (m, theta, q) in [(4.0f64, 0.5f64, 2.0f64), (0.3, 0.2, 0.5), (7.0, 0.9, 3.0), (4.0, 0.5, f64::INFINITY)] {
        let g = LatticeFunction::Plain(StepFunction::indicator(m)?);
        let ip = InterpParams::new(theta, q)?;
        let (got, _) = interp_norm_of(&g, &LatticeCouple::l1_linf(), ip, GridSpec::default(), &KOptions::default())?;
        let expected = if q.is_infinite() {
            m.powf(1.0 - theta)
        } else {
            m.powf(1.0 - theta) * (q * theta * (1.0 - theta)).powf(-1.0 / q)
        };
        out.push(SuiteCase::relative(format!("interp indicator m={m} θ={theta} q={q}"), got, expected, GOLDEN_TOL));
    }
    let f = StepFunction::from_pairs(&[(3.0, 0.25), (0.5, 2.0), (1.25, 1.0), (7.0, 0.125)])?;
    for p in [0.5, 1.0, 2.5] {
        let got = lorentz_norm(&f, ExponentPair::diagonal(p)?);
        let expected = p.powf(-1.0 / p) * lebesgue_norm(&f, p);
        out.push(SuiteCase::relative(format!("L^{{p,p}} = p^(-1/p) L^p, p={p}"), got, expected, GOLDEN_TOL));
    }
    let ratio = lorentz_identity_ratio(&StepFunction::indicator(3.0)?, InterpParams::new(0.5, 2.0)?)?;
    out.push(SuiteCase::relative("identity ratio indicator θ=0.5 q=2", ratio, 2.0, GOLDEN_TOL));
    Ok(out)
}

fn oracle_instance(rng: &mut ChaCha8Rng) -> Result<(StepFunction, f64)> {
    let n = rng.gen_range(1..=6);
    let pairs: Vec<(f64, f64)> =
        (0..n).map(|_| (10f64.powf(rng.gen_range(-2.0..2.0)), rng.gen_range(0.1..2.0))).collect();
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    let s = total * 10f64.powf(rng.gen_range(-1.5..0.5));
    Ok((StepFunction::from_pairs(&pairs)?, s))
}

fn k_oracle() -> Result<Vec<SuiteCase>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let couple = LatticeCouple::l1_linf();
    let mut out = Vec::new();
    for i in 0..200 {
        let (f, s) = oracle_instance(&mut rng)?;
        let exact = k_exact_l1_linf(&f, s);
        let atoms = f.levels().len();
        let g = LatticeFunction::from(f);
        let b = k_lattice(&g, &couple, s, KMethod::Brute)?;
        let d = k_lattice(&g, &couple, s, KMethod::Descent)?;
        out.push(SuiteCase::relative(format!("#{i:03} atoms={atoms} brute"), b, exact, 1e-3));
        out.push(SuiteCase::at_most(format!("#{i:03} atoms={atoms} descent"), d, b, 1e-6));
    }
    Ok(out)
}

fn commutation() -> Result<Vec<SuiteCase>> {
    let inner = LatticeCouple::l1_linf();
    let mut out = Vec::new();
    for (p, r) in [(2.0, 2.0), (2.0, 1.0), (0.5, 0.5)] {
        let e = pair(p, r)?;
        let c = e.quasi_triangle_constant();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for d in 0..100 {
            let f = identity_instance(31, 3, d);
            let total = f.x_space().total_mass() * f.y_space().total_mass();
            let s = total * 10f64.powf(rng.gen_range(-2.0..1.0));
            let k = k_commutation_ratio(&f, e, &inner, s, &KOptions::default())?;
            lo = lo.min(k.ratio);
            hi = hi.max(k.ratio);
        }
        out.push(SuiteCase::within(format!("(p,r)=({p},{r}) min ratio"), lo, 1.0 / c, c));
        out.push(SuiteCase::within(format!("(p,r)=({p},{r}) max ratio"), hi, 1.0 / c, c));
    }
    Ok(out)
}

fn lemma61() -> Result<Vec<SuiteCase>> {
    let mut out = Vec::new();
    for p in [0.5, 1.0, 2.0, 3.5] {
        let e = ExponentPair::diagonal(p)?;
        let worst = (0..100)
            .map(|d| (lemma61_ratio(&identity_instance(41, 4, d), e).ratio - 1.0).abs())
            .fold(0.0, f64::max);
        out.push(SuiteCase::relative(format!("r = p = {p}, 100 instances, worst"), 1.0 + worst, 1.0, GOLDEN_TOL));
    }
    let f = ProductStepFunction::tensor(
        MeasureSpace::discrete(vec![3.0])?,
        &[1.0],
        MeasureSpace::discrete(vec![5.0])?,
        &[1.0],
    )?;
    let rep = lemma61_ratio(&f, pair(2.0, 1.0)?);
    out.push(SuiteCase::relative("tensor (p,r)=(2,1) lhs", rep.lhs, 15f64.sqrt(), GOLDEN_TOL));
    out.push(SuiteCase::relative("tensor (p,r)=(2,1) ratio", rep.ratio, 1.0, GOLDEN_TOL));
    let env = crate::embeddings::bounds::recorded("lemma61-i", 8).expect("recorded envelope");
    let hi = crate::embeddings::bounds::run_batch(
        &crate::embeddings::bounds::Batch { sizes: &[8], ..crate::embeddings::bounds::LEMMA61_I },
        &Default::default(),
    )?[0]
        .iter()
        .copied()
        .fold(0.0, f64::max);
    out.push(SuiteCase::at_most("8x8 (p,r)=(1,2) max ratio vs recorded", hi, env.ceiling, 1e-9));
    Ok(out)
}

/// `∫₀^∞ g(t) dt` for a decaying `g` with rate at least `c`: composite
/// 32-node Gauss–Legendre on `[0, 60/c]`.
fn integrate_decaying(c: f64, g: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gauss_legendre(32);
    let panels = 400;
    let len = 60.0 / c / panels as f64;
    let mut sum = 0.0;
    for k in 0..panels {
        let mid = (k as f64 + 0.5) * len;
        for (xi, wi) in x.iter().zip(&w) {
            sum += wi * 0.5 * len * g(mid + 0.5 * len * xi);
        }
    }
    sum
}

/// `ln μ(ρ)` for `μ(ρ) = |{y > 0 : min(1, y^{-1/α}) ≥ ρ}|`, `ρ = e^{-t}`,
/// by bisection on `ln y` in log space so that tiny `ρ` do not underflow.
fn f41_log_distribution(t: f64, alpha: f64) -> f64 {
    let log_g = |ln_y: f64| if ln_y <= 0.0 { 0.0 } else { -ln_y / alpha };
    let mut hi = 1.0;
    while log_g(hi) >= -t {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if log_g(mid) >= -t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Both sides of the F41 comparison by quadrature: `lhs = ‖∫f(x,·)dx‖_{p,r}`,
/// `rhs = ∫‖f(x,·)‖_{p,r}dx`, substituting `x = e^{-t}` and `ρ = e^{-t}`.
pub fn f41_quadrature(p: f64, r: f64, alpha: f64) -> (f64, f64) {
    let c = 1.0 - alpha / p;
    let rhs = r.powf(-1.0 / r) * integrate_decaying(c, |t| (-t * c).exp());
    let lhs_r = integrate_decaying(r * c, |t| (-t * r + r / p * f41_log_distribution(t, alpha)).exp());
    (lhs_r.powf(1.0 / r), rhs)
}

fn quadrature() -> Result<Vec<SuiteCase>> {
    let mut out = Vec::new();
    for (p, r) in [(2.0f64, 2.0f64), (2.0, 0.5), (3.0, 1.0)] {
        for frac in [0.1, 0.05, 0.025, 0.0125] {
            let alpha = p - frac * p;
            let (lhs, rhs) = f41_quadrature(p, r, alpha);
            let closed = (p - alpha).powf(1.0 - 1.0 / r) * p.powf(1.0 / r - 1.0);
            let eval = family_eval(FamilyParams::F41 { alpha }, pair(p, r)?)?.ratio;
            out.push(SuiteCase::relative(format!("F41 p={p} r={r} α={alpha} closed form"), closed, lhs / rhs, 1e-10));
            out.push(SuiteCase::relative(format!("F41 p={p} r={r} α={alpha} evaluator"), eval, lhs / rhs, 1e-10));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for k in 0..6 {
        let n = rng.gen_range(2..=8);
        let pairs: Vec<(f64, f64)> =
            (0..n).map(|_| (10f64.powf(rng.gen_range(-2.0..2.0)), rng.gen_range(0.1..2.0))).collect();
        let g = LatticeFunction::Plain(StepFunction::from_pairs(&pairs)?);
        let curve = k_curve(&g, &LatticeCouple::l1_linf(), GridSpec::default(), &KOptions::default())?;
        let (theta, q) = [(0.5, 2.0), (0.3, 1.0), (0.8, 0.5)][k % 3];
        let ip = InterpParams::new(theta, q)?;
        let (a, b) = (interp_norm_with(&curve, ip, 32), interp_norm_with(&curve, ip, 64));
        out.push(SuiteCase::relative(format!("GL 32 vs 64 #{k} atoms={n} θ={theta} q={q}"), a, b, 1e-8));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f41_quadrature_matches_the_worked_example() {
        let (lhs, rhs) = f41_quadrature(2.0, 2.0, 1.0);
        assert!((lhs - 1.0).abs() < 1e-12 && (rhs - 2f64.sqrt()).abs() < 1e-12, "{lhs} {rhs}");
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn bound_cases() {
        assert!(SuiteCase::within("x", 1.5, 0.5, 2.0).pass);
        assert!(!SuiteCase::within("x", 2.5, 0.5, 2.0).pass);
        assert!(SuiteCase::at_most("x", 1.0, 1.0, 0.0).pass);
    }

    #[test]
    fn closed_forms_pass() {
        let rep = run_suite(Suite::ClosedForms).unwrap();
        assert!(rep.passed(), "{}", rep.table());
        assert_eq!(rep.cases.len(), 16);
    }

    #[test]
    fn quadrature_passes() {
        let rep = run_suite(Suite::Quadrature).unwrap();
        assert!(rep.passed(), "{}", rep.table());
    }
}
