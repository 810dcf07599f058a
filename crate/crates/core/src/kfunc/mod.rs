//! Peetre K-functionals `K(s, f; A₀, A₁) = inf_{f = f₀ + f₁} ‖f₀‖_{A₀} + s‖f₁‖_{A₁}`
//! for couples of monotone function quasi-norms.
//!
//! For such couples the infimum may be restricted to pointwise splits
//! `0 ≤ f₀ ≤ f`: clamping a decomposition into that range does not increase
//! either norm. The search runs over those splits.

mod commutation;
mod curve;
mod lattice;
mod search;

pub use commutation::{k_commutation_ratio, Commutation};
pub use curve::{k_curve, GridSpec, KCurve};
pub use lattice::{LatticeCouple, LatticeFunction, LatticeNorm};
pub use search::BruteConfig;

use lattice::{check_domain, Shape};
use search::{brute, descent, PointwiseSplit, Problem, SliceTruncation};

use crate::lorentz::StepFunction;
use crate::{Error, Result};

/// `K(s, f; L¹, L^∞) = ∫₀^s f*(u) du`, exact.
pub fn k_exact_l1_linf(f: &StepFunction, s: f64) -> f64 {
    let mut rest = s.max(0.0);
    let mut acc = 0.0;
    for l in f.canonical() {
        if rest <= 0.0 {
            break;
        }
        let take = rest.min(l.mass);
        acc += take * l.value;
        rest -= take;
    }
    acc
}

/// How [`k_lattice`] searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KMethod {
    /// Exhaustive grid plus refinement; refuses more than `max_dim` variables.
    Brute,
    /// Coordinate descent from several starts.
    Descent,
    /// Closed form when available, brute force when small enough, descent otherwise.
    Auto,
    /// Brute force and descent; errors when descent stalls above brute force.
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KOptions {
    pub method: KMethod,
    pub brute: BruteConfig,
    /// Permit descent (flagged heuristic) when brute force is too large under `Auto`.
    pub allow_heuristic: bool,
}

impl Default for KOptions {
    fn default() -> Self {
        Self { method: KMethod::Auto, brute: BruteConfig::default(), allow_heuristic: true }
    }
}

impl KOptions {
    pub fn with_method(method: KMethod) -> Self {
        Self { method, ..Self::default() }
    }
}

/// A K-functional value with provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct KValue {
    pub value: f64,
    /// `exact`, `brute`, `descent` or `brute+descent`.
    pub method: &'static str,
    /// Produced by descent alone, with no oracle behind it.
    pub heuristic: bool,
    /// The joint couple was reduced to one truncation level per slice.
    pub reduced: bool,
    /// Minimiser in the search variables, for warm starts.
    pub point: Vec<f64>,
}

impl KValue {
    fn exact(value: f64) -> Self {
        Self { value, method: "exact", heuristic: false, reduced: false, point: Vec::new() }
    }
}

/// `K(s, f; A₀, A₁)` with the default options.
pub fn k_lattice(f: &LatticeFunction, couple: &LatticeCouple, s: f64, method: KMethod) -> Result<f64> {
    Ok(k_lattice_with(f, couple, s, &KOptions::with_method(method), None)?.value)
}

/// `K(s, f; A₀, A₁)`; `warm` is a previous minimiser used as an extra descent start.
pub fn k_lattice_with(
    f: &LatticeFunction,
    couple: &LatticeCouple,
    s: f64,
    opts: &KOptions,
    warm: Option<&[f64]>,
) -> Result<KValue> {
    if !(s >= 0.0) || s.is_infinite() {
        return Err(Error::InvalidParameter(format!("K-functional parameter must be finite and ≥ 0, got {s}")));
    }
    let (values, shape) = f.atoms();
    check_domain(&couple.a0, &shape)?;
    check_domain(&couple.a1, &shape)?;
    if opts.method == KMethod::Auto {
        if couple.is_l1_linf() {
            return Ok(KValue::exact(k_exact_l1_linf(&f.flattened(), s)));
        }
        if couple.is_linf_l1() {
            let v = if s == 0.0 { 0.0 } else { s * k_exact_l1_linf(&f.flattened(), 1.0 / s) };
            return Ok(KValue::exact(v));
        }
    }
    if let Shape::Product { x, y } = &shape {
        if let (LatticeNorm::Mixed { outer: o0, inner: i0 }, LatticeNorm::Mixed { outer: o1, inner: i1 }) =
            (&couple.a0, &couple.a1)
        {
            if i0.is_l1_like() && i1.is_linf_like() {
                let p = SliceTruncation::new(o0, o1, s, values, x.clone(), y.clone());
                return run(&p, opts, warm).map(|k| KValue { reduced: true, ..k });
            }
            if i0.is_linf_like() && i1.is_l1_like() && s > 0.0 {
                // K(s; A₀, A₁) = s·K(1/s; A₁, A₀)
                let p = SliceTruncation::new(o1, o0, 1.0 / s, values, x.clone(), y.clone());
                return run(&p, opts, warm).map(|k| KValue { value: s * k.value, reduced: true, ..k });
            }
        }
    }
    let p = PointwiseSplit::new(couple, s, values, shape);
    run(&p, opts, warm)
}

fn run<P: Problem>(p: &P, opts: &KOptions, warm: Option<&[f64]>) -> Result<KValue> {
    let n = p.dim();
    let from = |found: search::Found, method, heuristic| KValue {
        value: found.value,
        method,
        heuristic,
        reduced: false,
        point: found.point,
    };
    match opts.method {
        KMethod::Brute => Ok(from(brute(p, &opts.brute)?, "brute", false)),
        KMethod::Descent => Ok(from(descent(p, warm), "descent", true)),
        KMethod::Auto => {
            if n <= opts.brute.max_dim {
                Ok(from(brute(p, &opts.brute)?, "brute", false))
            } else if opts.allow_heuristic {
                Ok(from(descent(p, warm), "descent", true))
            } else {
                Err(Error::TooManyAtoms { atoms: n, limit: opts.brute.max_dim })
            }
        }
        KMethod::Both => {
            let b = brute(p, &opts.brute)?;
            let d = descent(p, warm);
            if d.value > b.value * (1.0 + 1e-6) + f64::MIN_POSITIVE {
                return Err(Error::NonConvergence { descent: d.value, brute: b.value });
            }
            Ok(from(if d.value < b.value { d } else { b }, "brute+descent", false))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_examples() {
        let f = StepFunction::from_pairs(&[(2.0, 1.0), (1.0, 1.0)]).unwrap();
        assert_eq!(k_exact_l1_linf(&f, 1.5), 2.5);
        assert_eq!(k_exact_l1_linf(&f, 0.0), 0.0);
        assert_eq!(k_exact_l1_linf(&f, 2.0), 3.0);
        assert_eq!(k_exact_l1_linf(&f, 7.0), 3.0);
    }

    #[test]
    fn single_atom_search() {
        let f = LatticeFunction::from(StepFunction::from_pairs(&[(3.0, 2.0)]).unwrap());
        let c = LatticeCouple::l1_linf();
        for m in [KMethod::Brute, KMethod::Descent, KMethod::Both] {
            assert!((k_lattice(&f, &c, 1.0, m).unwrap() - 3.0).abs() < 1e-9);
            assert!((k_lattice(&f, &c, 5.0, m).unwrap() - 6.0).abs() < 1e-9);
        }
    }

    #[test]
    fn equal_spaces() {
        let f = LatticeFunction::from(StepFunction::from_pairs(&[(3.0, 2.0), (0.5, 1.0), (1.0, 4.0)]).unwrap());
        let c = LatticeCouple::new(LatticeNorm::Lebesgue(1.0), LatticeNorm::Lebesgue(1.0));
        let k = k_lattice(&f, &c, 0.5, KMethod::Brute).unwrap();
        assert!((k - 0.5 * 10.5).abs() < 1e-9, "{k}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = LatticeFunction::from(StepFunction::indicator(1.0).unwrap());
        let c = LatticeCouple::l1_linf();
        assert!(k_lattice(&f, &c, -1.0, KMethod::Auto).is_err());
        let big = LatticeFunction::from(StepFunction::from_pairs(&[(1.0, 1.0); 9].map(|p| p)).unwrap());
        assert!(matches!(k_lattice(&big, &c, 1.0, KMethod::Brute), Err(Error::TooManyAtoms { .. })));
    }
}
