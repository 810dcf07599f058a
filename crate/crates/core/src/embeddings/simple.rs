use crate::lorentz::{
    lebesgue_of_pairs, lorentz_norm, ExponentPair, MixedExponents, ProductStepFunction, StepFunction,
};
use crate::lorentz::mixed_lorentz_norm;
use crate::report::ProbeReport;
use crate::{Error, Result};

/// Product-space norm against the `L^p(X)` norm of the slice norms.
///
/// `lhs = ‖F‖_{L^{p,r}(X×Y)}`, `rhs = ‖x ↦ ‖F(x,·)‖_{p,r}‖_{L^p(X)}`; the
/// first is at most a constant times the second for `p ≤ r`, and the reverse
/// holds for `r ≤ p`. For `r = p` both equal `p^{-1/p}‖F‖_{L^p}`.
pub fn lemma61_ratio(f: &ProductStepFunction, e: ExponentPair) -> ProbeReport {
    let lhs = lorentz_norm(&f.flatten(), e);
    let slices: Vec<(f64, f64)> = (0..f.x_len())
        .map(|i| (lorentz_norm(&f.slice(i), e), f.x_space().masses()[i]))
        .collect();
    let rhs = lebesgue_of_pairs(slices.iter().copied(), e.p());
    let claim = match (e.p() <= e.r(), e.r() <= e.p()) {
        (true, true) => "lhs = rhs",
        (true, false) => "lhs <~ rhs",
        _ => "rhs <~ lhs",
    };
    let mut rep = ProbeReport::new("lemma61", lhs, rhs).param_f64("p", e.p()).param_f64("r", e.r());
    rep.claim = claim.into();
    rep.instance.x_size = f.x_len();
    rep.instance.y_size = f.y_len();
    rep
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p > 0.0) {
        return Err(Error::Hypothesis(format!("exponent {p} must be positive")));
    }
    Ok(())
}

/// Mixed Lebesgue norm against weak mixed norms:
/// `lhs = ‖F‖_{L^{p_θ¹}(L^{p_θ²})}`, `rhs = ‖F‖_{p⃗₀,∞}^{1−θ} ‖F‖_{p⃗₁,∞}^θ` with
/// `1/p_θ^i = (1−θ)/p₀^i + θ/p₁^i`. Requires `p₀^i ≠ p₁^i`.
pub fn log_convexity_probe(f: &ProductStepFunction, p0: [f64; 2], p1: [f64; 2], theta: f64) -> Result<ProbeReport> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Hypothesis(format!("θ = {theta} must lie in (0, 1)")));
    }
    for i in 0..2 {
        check_exponent(p0[i])?;
        check_exponent(p1[i])?;
        if p0[i] == p1[i] {
            return Err(Error::Hypothesis(format!("p0[{i}] = p1[{i}] = {}; the inequality needs p0 ≠ p1", p0[i])));
        }
    }
    let pt: [f64; 2] = [0, 1].map(|i| 1.0 / ((1.0 - theta) / p0[i] + theta / p1[i]));
    let ny = f.y_len();
    let slices: Vec<(f64, f64)> = (0..f.x_len())
        .map(|i| {
            let row = f.values()[i * ny..(i + 1) * ny].iter().copied().zip(f.y_space().masses().iter().copied());
            (lebesgue_of_pairs(row, pt[1]), f.x_space().masses()[i])
        })
        .collect();
    let lhs = lebesgue_of_pairs(slices.iter().copied(), pt[0]);
    let weak = |p: [f64; 2]| -> Result<f64> {
        let inf = f64::INFINITY;
        Ok(mixed_lorentz_norm(f, MixedExponents::new(ExponentPair::new(p[0], inf)?, ExponentPair::new(p[1], inf)?)))
    };
    let (w0, w1) = (weak(p0)?, weak(p1)?);
    let rhs = if w0 == 0.0 || w1 == 0.0 { 0.0 } else { w0.powf(1.0 - theta) * w1.powf(theta) };
    let mut rep = ProbeReport::new("chen-sun", lhs, rhs)
        .param("p0", vec![p0[0], p0[1]])
        .param("p1", vec![p1[0], p1[1]])
        .param("ptheta", vec![pt[0], pt[1]])
        .param_f64("theta", theta);
    rep.claim = "lhs <~ rhs".into();
    rep.instance.x_size = f.x_len();
    rep.instance.y_size = f.y_len();
    Ok(rep)
}

/// Second-index log-convexity on a plain function:
/// `‖u‖_{p,r_θ}` against `‖u‖_{p,r₀}^{1−θ}‖u‖_{p,r₁}^θ`, `1/r_θ = (1−θ)/r₀ + θ/r₁`.
/// Hölder's inequality in `L^r(dρ/ρ)` bounds the ratio by 1.
pub fn log_convexity_variant(u: &StepFunction, p: f64, r0: f64, r1: f64, theta: f64) -> Result<ProbeReport> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Hypothesis(format!("θ = {theta} must lie in (0, 1)")));
    }
    let rt = 1.0 / ((1.0 - theta) / r0 + theta / r1);
    let lhs = lorentz_norm(u, ExponentPair::new(p, rt)?);
    let (a, b) = (lorentz_norm(u, ExponentPair::new(p, r0)?), lorentz_norm(u, ExponentPair::new(p, r1)?));
    let rhs = if a == 0.0 || b == 0.0 { 0.0 } else { a.powf(1.0 - theta) * b.powf(theta) };
    let mut rep = ProbeReport::new("chen-sun-variant", lhs, rhs)
        .param_f64("p", p)
        .param_f64("r0", r0)
        .param_f64("r1", r1)
        .param_f64("rtheta", rt)
        .param_f64("theta", theta);
    rep.claim = "lhs <= rhs".into();
    rep.instance.x_size = u.levels().len();
    Ok(rep)
}
