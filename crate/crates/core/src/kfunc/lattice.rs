use std::fmt;

use crate::lorentz::{
    lebesgue_of_pairs, lorentz_norm_of_pairs, ExponentPair, MixedExponents, ProductStepFunction, StepFunction,
};
use crate::{Error, Result};

/// A monotone function quasi-norm.
#[derive(Clone, Debug, PartialEq)]
pub enum LatticeNorm {
    /// Unnormalised `L^p`, `0 < p ≤ ∞`.
    Lebesgue(f64),
    Lorentz(ExponentPair),
    /// `outer` over `X` of the `inner` norms of the `Y`-slices. Both parts are non-mixed.
    Mixed { outer: Box<LatticeNorm>, inner: Box<LatticeNorm> },
}

impl LatticeNorm {
    pub fn lebesgue(p: f64) -> Result<Self> {
        if !(p > 0.0) {
            return Err(Error::InvalidParameter(format!("Lebesgue exponent must be positive, got {p}")));
        }
        Ok(Self::Lebesgue(p))
    }

    pub fn lorentz(p: f64, r: f64) -> Result<Self> {
        Ok(Self::Lorentz(ExponentPair::new(p, r)?))
    }

    pub fn mixed(outer: LatticeNorm, inner: LatticeNorm) -> Result<Self> {
        if outer.is_mixed() || inner.is_mixed() {
            return Err(Error::InvalidParameter("mixed norms nest only one level deep".into()));
        }
        Ok(Self::Mixed { outer: Box::new(outer), inner: Box::new(inner) })
    }

    /// `L^{p¹,r¹}(X; L^{p²,r²}(Y))`.
    pub fn mixed_lorentz(m: MixedExponents) -> Self {
        Self::Mixed { outer: Box::new(Self::Lorentz(m.outer)), inner: Box::new(Self::Lorentz(m.inner)) }
    }

    pub fn is_mixed(&self) -> bool {
        matches!(self, Self::Mixed { .. })
    }

    /// `L¹`, written either way (`‖·‖_{1,1} = ‖·‖_{L¹}`).
    pub fn is_l1_like(&self) -> bool {
        match self {
            Self::Lebesgue(p) => *p == 1.0,
            Self::Lorentz(e) => e.p() == 1.0 && e.r() == 1.0,
            Self::Mixed { .. } => false,
        }
    }

    /// `L^∞`, written either way.
    pub fn is_linf_like(&self) -> bool {
        match self {
            Self::Lebesgue(p) => p.is_infinite(),
            Self::Lorentz(e) => e.p().is_infinite(),
            Self::Mixed { .. } => false,
        }
    }

    /// Norm of a nonnegative function on a plain space given as `(value, mass)` pairs.
    /// Reorders `pairs`. Mixed norms are not defined here.
    pub(crate) fn eval_pairs(&self, pairs: &mut [(f64, f64)]) -> f64 {
        match self {
            Self::Lebesgue(p) => lebesgue_of_pairs(pairs.iter().copied(), *p),
            Self::Lorentz(e) => lorentz_norm_of_pairs(pairs, *e),
            Self::Mixed { .. } => unreachable!("mixed norms need a product domain"),
        }
    }

    pub fn descriptor(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LatticeNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Lebesgue(p) => write!(f, "L^{}", crate::lorentz::fmt_exp(*p)),
            Self::Lorentz(e) => write!(f, "{e}"),
            Self::Mixed { outer, inner } => write!(f, "{outer}(X; {inner}(Y))"),
        }
    }
}

/// Two lattice norms on a common domain.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeCouple {
    pub a0: LatticeNorm,
    pub a1: LatticeNorm,
}

impl LatticeCouple {
    pub fn new(a0: LatticeNorm, a1: LatticeNorm) -> Self {
        Self { a0, a1 }
    }

    /// `(L¹, L^∞)`.
    pub fn l1_linf() -> Self {
        Self::new(LatticeNorm::Lebesgue(1.0), LatticeNorm::Lebesgue(f64::INFINITY))
    }

    /// `(L^{p,r}(X; A₀), L^{p,r}(X; A₁))` built from a couple acting on the slices.
    pub fn joint(outer: ExponentPair, inner: &LatticeCouple) -> Result<Self> {
        Ok(Self::new(
            LatticeNorm::mixed(LatticeNorm::Lorentz(outer), inner.a0.clone())?,
            LatticeNorm::mixed(LatticeNorm::Lorentz(outer), inner.a1.clone())?,
        ))
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.a1.clone(), self.a0.clone())
    }

    pub fn is_l1_linf(&self) -> bool {
        self.a0.is_l1_like() && self.a1.is_linf_like()
    }

    pub fn is_linf_l1(&self) -> bool {
        self.a0.is_linf_like() && self.a1.is_l1_like()
    }

    pub fn descriptor(&self) -> String {
        format!("({}, {})", self.a0, self.a1)
    }
}

/// A function on a plain or product domain.
#[derive(Clone, Debug, PartialEq)]
pub enum LatticeFunction {
    Plain(StepFunction),
    Product(ProductStepFunction),
}

impl From<StepFunction> for LatticeFunction {
    fn from(f: StepFunction) -> Self {
        Self::Plain(f)
    }
}

impl From<ProductStepFunction> for LatticeFunction {
    fn from(f: ProductStepFunction) -> Self {
        Self::Product(f)
    }
}

/// Atom masses of the domain; values are laid out to match.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Shape {
    Plain(Vec<f64>),
    Product { x: Vec<f64>, y: Vec<f64> },
}

impl LatticeFunction {
    pub(crate) fn atoms(&self) -> (Vec<f64>, Shape) {
        match self {
            Self::Plain(f) => (
                f.levels().iter().map(|l| l.value).collect(),
                Shape::Plain(f.levels().iter().map(|l| l.mass).collect()),
            ),
            Self::Product(f) => (
                f.values().to_vec(),
                Shape::Product { x: f.x_space().masses().to_vec(), y: f.y_space().masses().to_vec() },
            ),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Plain(f) => f.is_zero(),
            Self::Product(f) => f.is_zero(),
        }
    }

    /// `λ·f`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Ok(match self {
            Self::Plain(f) => Self::Plain(f.scaled(lambda)?),
            Self::Product(f) => Self::Product(f.scaled(lambda)?),
        })
    }

    /// As a single function on the (product) measure space.
    pub fn flattened(&self) -> StepFunction {
        match self {
            Self::Plain(f) => f.clone(),
            Self::Product(f) => f.flatten(),
        }
    }

    pub fn norm(&self, norm: &LatticeNorm) -> Result<f64> {
        let (values, shape) = self.atoms();
        check_domain(norm, &shape)?;
        Ok(Evaluator::new(shape).eval(norm, &values))
    }
}

pub(crate) fn check_domain(norm: &LatticeNorm, shape: &Shape) -> Result<()> {
    if norm.is_mixed() && matches!(shape, Shape::Plain(_)) {
        return Err(Error::DomainMismatch { norm: norm.descriptor(), domain: "plain" });
    }
    Ok(())
}

/// Evaluates lattice norms of value vectors laid out on a fixed shape.
pub(crate) struct Evaluator {
    shape: Shape,
    pairs: Vec<(f64, f64)>,
    slices: Vec<f64>,
}

impl Evaluator {
    pub(crate) fn new(shape: Shape) -> Self {
        Self { shape, pairs: Vec::new(), slices: Vec::new() }
    }

    pub(crate) fn eval(&mut self, norm: &LatticeNorm, values: &[f64]) -> f64 {
        let Self { shape, pairs, slices } = self;
        pairs.clear();
        match (shape, norm) {
            (Shape::Plain(m), _) => {
                pairs.extend(values.iter().copied().zip(m.iter().copied()));
                norm.eval_pairs(pairs)
            }
            (Shape::Product { x, y }, LatticeNorm::Mixed { outer, inner }) => {
                slices.clear();
                let ny = y.len();
                for i in 0..x.len() {
                    pairs.clear();
                    pairs.extend(values[i * ny..(i + 1) * ny].iter().copied().zip(y.iter().copied()));
                    slices.push(inner.eval_pairs(pairs));
                }
                pairs.clear();
                pairs.extend(slices.iter().copied().zip(x.iter().copied()));
                outer.eval_pairs(pairs)
            }
            (Shape::Product { x, y }, _) => {
                for (i, mx) in x.iter().enumerate() {
                    for (j, my) in y.iter().enumerate() {
                        pairs.push((values[i * y.len() + j], mx * my));
                    }
                }
                norm.eval_pairs(pairs)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::{lorentz_norm, mixed_lorentz_norm, MeasureSpace};

    #[test]
    fn evaluator_matches_lorentz_core() {
        let x = MeasureSpace::discrete(vec![0.5, 2.0]).unwrap();
        let y = MeasureSpace::discrete(vec![1.0, 3.0, 0.25]).unwrap();
        let f = ProductStepFunction::new(x, y, vec![1.0, 0.0, 4.0, 2.0, 2.0, 0.5]).unwrap();
        let m = MixedExponents::new(ExponentPair::new(2.0, 1.0).unwrap(), ExponentPair::new(0.5, 3.0).unwrap());
        let g = LatticeFunction::from(f.clone());
        assert_eq!(g.norm(&LatticeNorm::mixed_lorentz(m)).unwrap(), mixed_lorentz_norm(&f, m));
        let e = ExponentPair::new(3.0, 0.7).unwrap();
        let flat = g.norm(&LatticeNorm::Lorentz(e)).unwrap();
        assert!((flat - lorentz_norm(&f.flatten(), e)).abs() < 1e-15 * flat);
    }

    #[test]
    fn mixed_norm_on_plain_domain_is_rejected() {
        let f = LatticeFunction::from(StepFunction::indicator(1.0).unwrap());
        let n = LatticeNorm::mixed(LatticeNorm::Lebesgue(1.0), LatticeNorm::Lebesgue(1.0)).unwrap();
        assert!(matches!(f.norm(&n), Err(Error::DomainMismatch { .. })));
        assert!(LatticeNorm::mixed(n.clone(), LatticeNorm::Lebesgue(1.0)).is_err());
    }

    #[test]
    fn couple_predicates() {
        let c = LatticeCouple::l1_linf();
        assert!(c.is_l1_linf() && !c.is_linf_l1());
        assert!(c.swapped().is_linf_l1());
        let lorentz = LatticeCouple::new(LatticeNorm::lorentz(1.0, 1.0).unwrap(), LatticeNorm::lorentz(f64::INFINITY, f64::INFINITY).unwrap());
        assert!(lorentz.is_l1_linf());
        assert_eq!(c.descriptor(), "(L^1, L^∞)");
    }
}
