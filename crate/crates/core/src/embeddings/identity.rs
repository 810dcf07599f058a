use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::cwikel::annotate;
use super::ProbeConfig;
use crate::interp::{interp_norm_of, InterpParams};
use crate::kfunc::{LatticeCouple, LatticeFunction, LatticeNorm};
use crate::lorentz::{lorentz_norm, ExponentPair, MixedExponents, ProductStepFunction};
use crate::minkowski::{cell_seed, random_instance};
use crate::report::ProbeReport;
use crate::{Error, Result};

/// Which mixed-norm interpolation identity to probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityKind {
    /// `(L^{p⃗₀,r⃗₀}, L^{p⃗₁,r⃗₁})_{(1−ϑ)θ₀+ϑθ₁, q} = (L^{p⃗_{θ₀}}, L^{p⃗_{θ₁}})_{ϑ,q}`.
    Theorem11,
    /// Equal exponents on both axes: `(L^{p⃗₀,r⃗₀}, L^{p⃗₁,r⃗₁})_{θ,q} = L^{p_θ,q}(X×Y)`.
    Corollary12,
}

impl IdentityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IdentityKind::Theorem11 => "theorem11",
            IdentityKind::Corollary12 => "corollary12",
        }
    }
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "theorem11" => Ok(IdentityKind::Theorem11),
            "corollary12" => Ok(IdentityKind::Corollary12),
            other => Err(Error::InvalidParameter(format!(
                "unknown identity '{other}' (expected theorem11 or corollary12)"
            ))),
        }
    }
}

/// Exponents of an identity probe. Index 0 is the outer (`X`) axis.
///
/// For [`IdentityKind::Corollary12`] only `theta` is used as the parameter;
/// for [`IdentityKind::Theorem11`] the left side is taken at
/// `(1−ϑ)θ₀ + ϑθ₁` with `ϑ = theta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityParams {
    pub p0: [f64; 2],
    pub r0: [f64; 2],
    pub p1: [f64; 2],
    pub r1: [f64; 2],
    pub theta0: f64,
    pub theta1: f64,
    pub theta: f64,
    pub q: f64,
}

impl IdentityParams {
    /// Equal exponents on both axes and a common second index `r`.
    pub fn corollary(p0: f64, p1: f64, r: f64, q: f64, theta: f64) -> Self {
        Self { p0: [p0; 2], r0: [r; 2], p1: [p1; 2], r1: [r; 2], theta0: 0.0, theta1: 1.0, theta, q }
    }

    fn pairs(&self) -> Result<[MixedExponents; 2]> {
        let m = |p: [f64; 2], r: [f64; 2]| -> Result<MixedExponents> {
            Ok(MixedExponents::new(ExponentPair::new(p[0], r[0])?, ExponentPair::new(p[1], r[1])?))
        };
        Ok([m(self.p0, self.r0)?, m(self.p1, self.r1)?])
    }

    /// `1/p_t^i = (1−t)/p₀^i + t/p₁^i`.
    pub fn p_at(&self, t: f64) -> [f64; 2] {
        [0, 1].map(|i| 1.0 / ((1.0 - t) / self.p0[i] + t / self.p1[i]))
    }

    /// Parameter of the left-hand interpolation space.
    pub fn outer_theta(&self, kind: IdentityKind) -> f64 {
        match kind {
            IdentityKind::Corollary12 => self.theta,
            IdentityKind::Theorem11 => (1.0 - self.theta) * self.theta0 + self.theta * self.theta1,
        }
    }

    /// Checks the hypotheses of the identity.
    pub fn validate(&self, kind: IdentityKind) -> Result<()> {
        let hyp = |msg: String| Err(Error::Hypothesis(msg));
        for (i, pair) in self.pairs()?.iter().enumerate() {
            for e in [pair.outer, pair.inner] {
                if !e.is_normable() {
                    return hyp(format!("exponents (p, r) = ({}, {}) of A{i} are not normable", e.p(), e.r()));
                }
            }
        }
        for i in 0..2 {
            if self.p0[i] == self.p1[i] {
                return hyp(format!("p0[{i}] = p1[{i}] = {}; the identity needs p0 ≠ p1", self.p0[i]));
            }
        }
        if !(self.q >= 1.0) {
            return hyp(format!("q = {} must lie in [1, ∞]", self.q));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return hyp(format!("θ = {} must lie in (0, 1)", self.theta));
        }
        match kind {
            IdentityKind::Corollary12 => {
                if self.p0[0] != self.p0[1] || self.p1[0] != self.p1[1] {
                    return hyp("corollary12 needs equal exponents on both axes".into());
                }
            }
            IdentityKind::Theorem11 => {
                let ok = |t: f64| (0.0..=1.0).contains(&t);
                if !(ok(self.theta0) && ok(self.theta1)) || self.theta0 == self.theta1 {
                    return hyp(format!(
                        "θ0 = {}, θ1 = {} must be distinct points of [0, 1]",
                        self.theta0, self.theta1
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Evaluates one identity on one function.
pub fn identity_report(
    kind: IdentityKind,
    params: &IdentityParams,
    f: &ProductStepFunction,
    cfg: &ProbeConfig,
) -> Result<ProbeReport> {
    params.validate(kind)?;
    let [m0, m1] = params.pairs()?;
    let g = LatticeFunction::Product(f.clone());
    let lorentz = LatticeCouple::new(LatticeNorm::mixed_lorentz(m0), LatticeNorm::mixed_lorentz(m1));
    let t = params.outer_theta(kind);
    let (lhs, c0) = interp_norm_of(&g, &lorentz, InterpParams::new(t, params.q)?, cfg.grid, &cfg.k)?;
    let mut curves = vec![c0];
    let rhs = match kind {
        IdentityKind::Corollary12 => {
            let pt = params.p_at(params.theta)[0];
            lorentz_norm(&f.flatten(), ExponentPair::new(pt, params.q)?)
        }
        IdentityKind::Theorem11 => {
            let mixed = |p: [f64; 2]| -> Result<LatticeNorm> {
                LatticeNorm::mixed(LatticeNorm::lebesgue(p[0])?, LatticeNorm::lebesgue(p[1])?)
            };
            let couple = LatticeCouple::new(mixed(params.p_at(params.theta0))?, mixed(params.p_at(params.theta1))?);
            let (v, c1) = interp_norm_of(&g, &couple, InterpParams::new(params.theta, params.q)?, cfg.grid, &cfg.k)?;
            curves.push(c1);
            v
        }
    };
    let mut rep = ProbeReport::new(kind.as_str(), lhs, rhs)
        .param("p0", params.p0.to_vec())
        .param("r0", params.r0.to_vec())
        .param("p1", params.p1.to_vec())
        .param("r1", params.r1.to_vec())
        .param_f64("q", params.q)
        .param_f64("theta", params.theta);
    if kind == IdentityKind::Theorem11 {
        rep = rep.param_f64("theta0", params.theta0).param_f64("theta1", params.theta1).param_f64("outerTheta", t);
    }
    rep.claim = "lhs ~ rhs".into();
    rep.instance.x_size = f.x_len();
    rep.instance.y_size = f.y_len();
    let refs: Vec<_> = curves.iter().collect();
    annotate(&mut rep, &refs, cfg);
    Ok(rep)
}

/// The `draw`-th random `n × n` instance of a batch.
pub fn identity_instance(seed: u64, n: usize, draw: usize) -> ProductStepFunction {
    random_instance(&mut ChaCha8Rng::seed_from_u64(cell_seed(seed, draw, n)), n)
}

/// Runs `draws` seeded instances for each size `n` (an `n × n` grid).
/// Fails with `TooManyAtoms` when an instance needs the heuristic search and
/// `cfg.k.allow_heuristic` is off.
pub fn identity_probe(
    kind: IdentityKind,
    params: &IdentityParams,
    sizes: &[usize],
    draws: usize,
    seed: u64,
    cfg: &ProbeConfig,
) -> Result<Vec<ProbeReport>> {
    params.validate(kind)?;
    let jobs: Vec<(usize, usize)> = sizes.iter().flat_map(|&n| (0..draws).map(move |d| (n, d))).collect();
    jobs.par_iter()
        .map(|&(n, d)| {
            let mut rep = identity_report(kind, params, &identity_instance(seed, n, d), cfg)?;
            rep.instance.seed = Some(seed);
            rep.instance.draw = Some(d);
            Ok(rep)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let ok = IdentityParams::corollary(2.0, 4.0, 1.0, 2.0, 0.5);
        assert!(ok.validate(IdentityKind::Corollary12).is_ok());
        assert!(IdentityParams::corollary(2.0, 2.0, 1.0, 2.0, 0.5).validate(IdentityKind::Corollary12).is_err());
        assert!(IdentityParams::corollary(2.0, 4.0, 1.0, 0.5, 0.5).validate(IdentityKind::Corollary12).is_err());
        assert!(IdentityParams::corollary(0.5, 4.0, 1.0, 2.0, 0.5).validate(IdentityKind::Corollary12).is_err());
        assert!(IdentityParams { theta: 1.0, ..ok }.validate(IdentityKind::Corollary12).is_err());
        let mut t = ok;
        t.p0 = [2.0, 3.0];
        assert!(t.validate(IdentityKind::Corollary12).is_err());
        t.theta0 = 0.25;
        t.theta1 = 0.75;
        assert!(t.validate(IdentityKind::Theorem11).is_ok());
        t.theta1 = 0.25;
        assert!(t.validate(IdentityKind::Theorem11).is_err());
    }

    #[test]
    fn p_at_interpolates_reciprocals() {
        let p = IdentityParams::corollary(2.0, 4.0, 1.0, 2.0, 0.5);
        assert!((p.p_at(0.5)[0] - 8.0 / 3.0).abs() < 1e-15);
    }
}
