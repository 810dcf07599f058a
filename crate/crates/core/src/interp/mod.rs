//! Real interpolation quasi-norms
//! `‖f‖_{θ,q} = (∫₀^∞ (s^{-θ} K(s, f))^q ds/s)^{1/q}` from sampled K-curves.

mod quadrature;

pub use quadrature::gauss_legendre;

use crate::kfunc::{k_curve, GridSpec, KCurve, KOptions, LatticeCouple, LatticeFunction};
use crate::lorentz::{lorentz_norm, ExponentPair, StepFunction};
use crate::{Error, Result};

/// Interpolation parameters `0 < θ < 1`, `0 < q ≤ ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterpParams {
    theta: f64,
    q: f64,
}

impl InterpParams {
    pub fn new(theta: f64, q: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidParameter(format!("θ must lie in (0, 1), got {theta}")));
        }
        if !(q > 0.0) {
            return Err(Error::InvalidParameter(format!("q must be positive or ∞, got {q}")));
        }
        Ok(Self { theta, q })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Parameters for the exchanged couple `(A₁, A₀)`.
    pub fn exchanged(&self) -> Self {
        Self { theta: 1.0 - self.theta, q: self.q }
    }
}

/// Quadrature nodes per piece.
pub const DEFAULT_NODES: usize = 32;
const LINEARITY_TOL: f64 = 1e-6;

/// `K(s)/s` constant over the first decade of the samples.
pub fn head_is_linear(curve: &KCurve) -> bool {
    let s0 = curve.s_min();
    let slope = |p: &[f64; 2]| p[1] / p[0];
    let c = slope(&curve.samples[0]);
    curve.samples.iter().take_while(|p| p[0] <= 10.0 * s0).all(|p| (slope(p) - c).abs() <= LINEARITY_TOL * c.abs())
}

/// `K` constant over the last decade of the samples.
pub fn tail_is_flat(curve: &KCurve) -> bool {
    let s1 = curve.s_max();
    let a = curve.samples.last().map_or(0.0, |p| p[1]);
    curve.samples.iter().rev().take_while(|p| p[0] >= s1 / 10.0).all(|p| (p[1] - a).abs() <= LINEARITY_TOL * a.abs())
}

/// Interpolation norm of a sampled curve; `+∞` when the head or tail checks fail.
///
/// Below the first sample `K(s)` is continued linearly, above the last one it is
/// continued as a constant, both integrated in closed form. Between samples `K`
/// is interpolated linearly and integrated in `ln s` by Gauss–Legendre.
pub fn interp_norm(curve: &KCurve, ip: InterpParams) -> f64 {
    interp_norm_with(curve, ip, DEFAULT_NODES)
}

/// [`interp_norm`] with a chosen number of Gauss–Legendre nodes per piece.
pub fn interp_norm_with(curve: &KCurve, ip: InterpParams, nodes: usize) -> f64 {
    if curve.samples.is_empty() || curve.is_zero() {
        return 0.0;
    }
    if !head_is_linear(curve) || !tail_is_flat(curve) {
        return f64::INFINITY;
    }
    let (theta, q) = (ip.theta, ip.q);
    // Work with K/k_scale and s/s_scale; restore the scales at the end.
    let k_scale = curve.samples.iter().map(|p| p[1]).fold(0.0, f64::max);
    let s_scale = (curve.s_min() * curve.s_max()).sqrt();
    let pts: Vec<(f64, f64)> = curve.samples.iter().map(|p| (p[0] / s_scale, p[1] / k_scale)).collect();
    let restore = k_scale * s_scale.powf(-theta);
    let (s0, k0) = pts[0];
    let (s1, k1) = pts[pts.len() - 1];
    let c = k0 / s0;

    if q.is_infinite() {
        let mut sup: f64 = 0.0;
        for w in pts.windows(2) {
            let ((sa, ka), (sb, kb)) = (w[0], w[1]);
            sup = sup.max(ka * sa.powf(-theta)).max(kb * sb.powf(-theta));
            let b = (kb - ka) / (sb - sa);
            let a = ka - b * sa;
            if a > 0.0 && b > 0.0 {
                let crit = theta * a / ((1.0 - theta) * b);
                if crit > sa && crit < sb {
                    sup = sup.max((a + b * crit) * crit.powf(-theta));
                }
            }
        }
        sup = sup.max(k0 * s0.powf(-theta)).max(k1 * s1.powf(-theta));
        return restore * sup;
    }

    let (x, w) = quadrature::rule(nodes);
    let head = c.powf(q) * s0.powf(q * (1.0 - theta)) / (q * (1.0 - theta));
    let tail = k1.powf(q) * s1.powf(-theta * q) / (theta * q);
    let mut body = 0.0;
    for win in pts.windows(2) {
        let ((sa, ka), (sb, kb)) = (win[0], win[1]);
        let (ua, ub) = (sa.ln(), sb.ln());
        let (mid, half) = ((ua + ub) / 2.0, (ub - ua) / 2.0);
        let slope = (kb - ka) / (sb - sa);
        let mut piece = 0.0;
        for (xi, wi) in x.iter().zip(w) {
            let u = mid + half * xi;
            let s = u.exp();
            let k = ka + slope * (s - sa);
            piece += wi * (k * (-theta * u).exp()).powf(q);
        }
        body += half * piece;
    }
    restore * (head + body + tail).powf(1.0 / q)
}

/// Samples the K-curve and evaluates the interpolation norm, widening the
/// grid once (to twice the span) when the head or tail checks fail.
pub fn interp_norm_of(
    f: &LatticeFunction,
    couple: &LatticeCouple,
    ip: InterpParams,
    grid: GridSpec,
    opts: &KOptions,
) -> Result<(f64, KCurve)> {
    let curve = k_curve(f, couple, grid, opts)?;
    let v = interp_norm(&curve, ip);
    if v.is_finite() {
        return Ok((v, curve));
    }
    let wide = GridSpec { count: grid.count * 2, span_decades: grid.span_decades * 2.0 };
    let curve = k_curve(f, couple, wide, opts)?;
    Ok((interp_norm(&curve, ip), curve))
}

/// `‖f‖_{(L¹,L^∞)_{θ,q}} / ‖f‖_{1/(1−θ), q}`.
pub fn lorentz_identity_ratio(f: &StepFunction, ip: InterpParams) -> Result<f64> {
    let g = LatticeFunction::Plain(f.clone());
    let (num, _) = interp_norm_of(&g, &LatticeCouple::l1_linf(), ip, GridSpec::default(), &KOptions::default())?;
    let den = lorentz_norm(f, ExponentPair::new(1.0 / (1.0 - ip.theta), ip.q)?);
    Ok(crate::report::ratio_of(num, den).0)
}
