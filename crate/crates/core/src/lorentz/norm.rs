use super::exponent::{ExponentPair, MixedExponents};
use super::product::ProductStepFunction;
use super::step::StepFunction;
use crate::{Error, Result};

/// `μ({|f| ≥ ρ})`, exact.
pub fn distribution(f: &StepFunction, rho: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::InvalidParameter(format!("distribution threshold must be positive, got {rho}")));
    }
    Ok(f.levels().iter().filter(|l| l.value >= rho).map(|l| l.mass).sum())
}

/// Streaming evaluator of `‖·‖_{p,r}` fed with levels in nonincreasing value order.
///
/// With cumulative masses `M_j` the quasi-norm is
/// `(r⁻¹ Σ_j v_j^r (M_j^{r/p} − M_{j−1}^{r/p}))^{1/r}`, which is the closed-form
/// integral of `ρ^{r−1} μ(ρ)^{r/p}` over the pieces where the distribution
/// function is constant. For `r = ∞` it is `sup_j v_j M_j^{1/p}`.
///
/// Values are normalised by the first (largest) value and masses by
/// `mass_scale`, so neither `v^r` nor `M^{r/p}` overflows.
#[derive(Clone, Debug)]
pub struct LorentzAccumulator {
    exponents: ExponentPair,
    mass_scale: f64,
    value_scale: f64,
    cumulative: f64,
    previous_power: f64,
    sum: f64,
    compensation: f64,
    sup: f64,
}

impl LorentzAccumulator {
    pub fn new(exponents: ExponentPair, mass_scale: f64) -> Self {
        let mass_scale = if mass_scale > 0.0 && mass_scale.is_finite() { mass_scale } else { 1.0 };
        Self {
            exponents,
            mass_scale,
            value_scale: 0.0,
            cumulative: 0.0,
            previous_power: 0.0,
            sum: 0.0,
            compensation: 0.0,
            sup: 0.0,
        }
    }

    /// Adds a level. Values must arrive in nonincreasing order.
    #[inline]
    pub fn push(&mut self, value: f64, mass: f64) {
        if !(value > 0.0 && mass > 0.0) {
            return;
        }
        if self.value_scale == 0.0 {
            self.value_scale = value;
        }
        let (p, r) = (self.exponents.p(), self.exponents.r());
        if p.is_infinite() {
            return;
        }
        let v = value / self.value_scale;
        self.cumulative += mass / self.mass_scale;
        if r.is_infinite() {
            self.sup = self.sup.max(v * self.cumulative.powf(1.0 / p));
            return;
        }
        let power = self.cumulative.powf(r / p);
        let term = v.powf(r) * (power - self.previous_power);
        self.previous_power = power;
        // Neumaier summation: the F43/F44 evaluators stream ~10⁸ levels.
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.compensation += (self.sum - t) + term;
        } else {
            self.compensation += (term - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn finish(&self) -> f64 {
        if self.value_scale == 0.0 {
            return 0.0;
        }
        let (p, r) = (self.exponents.p(), self.exponents.r());
        if p.is_infinite() {
            return self.value_scale;
        }
        let scale = self.value_scale * self.mass_scale.powf(1.0 / p);
        if r.is_infinite() {
            scale * self.sup
        } else {
            scale * ((self.sum + self.compensation) / r).powf(1.0 / r)
        }
    }
}

/// Exact `‖f‖_{p,r}`. Always finite for step functions on finite measure spaces.
pub fn lorentz_norm(f: &StepFunction, e: ExponentPair) -> f64 {
    let levels = f.canonical();
    let total: f64 = levels.iter().map(|l| l.mass).sum();
    let mut acc = LorentzAccumulator::new(e, total);
    for l in &levels {
        acc.push(l.value, l.mass);
    }
    acc.finish()
}

/// `‖·‖_{p,r}` of the function taking `value` on a set of measure `mass` for each pair.
/// Sorts `pairs` in place; equal values need not be merged.
pub fn lorentz_norm_of_pairs(pairs: &mut [(f64, f64)], e: ExponentPair) -> f64 {
    pairs.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));
    let total: f64 = pairs.iter().filter(|x| x.0 > 0.0).map(|x| x.1).sum();
    let mut acc = LorentzAccumulator::new(e, total);
    for &(v, m) in pairs.iter() {
        acc.push(v.abs(), m);
    }
    acc.finish()
}

/// Plain (unnormalised) Lebesgue norm `(Σ v^p m)^{1/p}`; `p = ∞` gives the largest value.
pub fn lebesgue_norm(f: &StepFunction, p: f64) -> f64 {
    lebesgue_of_pairs(f.levels().iter().map(|l| (l.value, l.mass)), p)
}

/// Lebesgue norm of `(value, mass)` pairs.
pub fn lebesgue_of_pairs(pairs: impl Iterator<Item = (f64, f64)> + Clone, p: f64) -> f64 {
    let top = pairs.clone().filter(|(_, m)| *m > 0.0).map(|(v, _)| v.abs()).fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return top;
    }
    let s: f64 = pairs.map(|(v, m)| (v.abs() / top).powf(p) * m).sum();
    top * s.powf(1.0 / p)
}

/// `‖F‖_{p⃗,r⃗}`: inner norm of every `x`-slice, then the outer norm over `X`.
pub fn mixed_lorentz_norm(f: &ProductStepFunction, m: MixedExponents) -> f64 {
    let slices: Vec<f64> = (0..f.x_len()).map(|i| lorentz_norm(&f.slice(i), m.inner)).collect();
    let outer = StepFunction::from_atoms(f.x_space().clone(), &slices)
        .expect("slice norms are finite and nonnegative");
    lorentz_norm(&outer, m.outer)
}

/// Constant `C(p,r)` of the quasi-triangle inequality, see [`ExponentPair::quasi_triangle_constant`].
pub fn quasi_triangle_constant(e: ExponentPair) -> f64 {
    e.quasi_triangle_constant()
}
