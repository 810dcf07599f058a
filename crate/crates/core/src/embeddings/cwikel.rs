use std::fmt;
use std::str::FromStr;

use serde_json::json;

use super::{ProbeConfig, RATIO_ONLY_NOTE};
use crate::interp::{interp_norm_of, InterpParams};
use crate::kfunc::{KCurve, LatticeCouple, LatticeFunction};
use crate::lorentz::{lorentz_norm_of_pairs, ExponentPair, ProductStepFunction};
use crate::report::ProbeReport;
use crate::{Error, Result};

/// Exponent regimes of the vector-valued embeddings.
///
/// * `I`: `0 < q < p < ∞` and `q ≤ r ≤ ∞`, or `p = q = r`. The joint
///   interpolation space embeds into the space of slice-wise interpolations.
/// * `II`: `0 < p < q ≤ ∞` and `0 < r ≤ q`, or `p = q = r`. The reverse embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    I,
    II,
}

impl Regime {
    pub fn holds_for(self, p: f64, q: f64, r: f64) -> bool {
        if p == q && q == r {
            return true;
        }
        match self {
            Regime::I => 0.0 < q && q < p && p.is_finite() && q <= r,
            Regime::II => 0.0 < p && p < q && 0.0 < r && r <= q,
        }
    }

    pub fn condition(self) -> &'static str {
        match self {
            Regime::I => "0 < q < p < ∞ and q ≤ r ≤ ∞, or p = q = r",
            Regime::II => "0 < p < q ≤ ∞ and 0 < r ≤ q, or p = q = r",
        }
    }

    /// The comparison tested: `lhs` is the joint interpolation norm.
    pub fn claim(self) -> &'static str {
        match self {
            Regime::I => "lhs >~ rhs",
            Regime::II => "rhs >~ lhs",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::I => "i",
            Regime::II => "ii",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(Regime::I),
            "ii" | "2" => Ok(Regime::II),
            other => Err(Error::InvalidParameter(format!("unknown regime '{other}' (expected i or ii)"))),
        }
    }
}

pub(super) fn annotate(rep: &mut ProbeReport, curves: &[&KCurve], cfg: &ProbeConfig) {
    let heuristic = curves.iter().any(|c| c.heuristic);
    let mut methods: Vec<&str> = curves.iter().map(|c| c.method.as_str()).collect();
    methods.sort_unstable();
    methods.dedup();
    rep.method = methods.join("+");
    if heuristic {
        rep.flags.push("heuristic".into());
    }
    if !(rep.lhs.is_finite() && rep.rhs.is_finite()) {
        rep.flags.push("divergent".into());
    }
    let samples = curves.iter().map(|c| c.samples.len()).max().unwrap_or(0);
    rep.discretization.insert("kSamples".into(), json!(samples));
    rep.discretization.insert("spanDecades".into(), json!(cfg.grid.span_decades));
    rep.discretization.insert("bruteBudget".into(), json!(cfg.k.brute.budget));
    rep.discretization.insert("note".into(), json!(RATIO_ONLY_NOTE));
}

/// Compares `‖F‖_{(L^{p,r}(X;A₀), L^{p,r}(X;A₁))_{θ,q}}` (lhs) with
/// `‖x ↦ ‖F(x,·)‖_{(A₀,A₁)_{θ,q}}‖_{L^{p,r}(X)}` (rhs), where `(A₀, A₁)` is
/// `inner`. Rejects exponents outside `regime`.
pub fn cwikel_probe(
    f: &ProductStepFunction,
    e: ExponentPair,
    ip: InterpParams,
    inner: &LatticeCouple,
    regime: Regime,
    cfg: &ProbeConfig,
) -> Result<ProbeReport> {
    let (p, q, r) = (e.p(), ip.q(), e.r());
    if !regime.holds_for(p, q, r) {
        return Err(Error::Hypothesis(format!(
            "(p, q, r) = ({p}, {q}, {r}) violates regime ({regime}): {}",
            regime.condition()
        )));
    }
    let joint = LatticeCouple::joint(e, inner)?;
    let (lhs, joint_curve) = interp_norm_of(&LatticeFunction::Product(f.clone()), &joint, ip, cfg.grid, &cfg.k)?;
    let mut curves = vec![joint_curve];
    let mut pairs = Vec::with_capacity(f.x_len());
    for i in 0..f.x_len() {
        let slice = LatticeFunction::Plain(f.slice(i));
        let v = if slice.is_zero() {
            0.0
        } else {
            let (v, c) = interp_norm_of(&slice, inner, ip, cfg.grid, &cfg.k)?;
            curves.push(c);
            v
        };
        pairs.push((v, f.x_space().masses()[i]));
    }
    let rhs = lorentz_norm_of_pairs(&mut pairs, e);
    let mut rep = ProbeReport::new("cwikel", lhs, rhs)
        .param_f64("p", p)
        .param_f64("r", r)
        .param_f64("q", q)
        .param_f64("theta", ip.theta())
        .param("regime", regime.as_str())
        .param("couple", inner.descriptor());
    rep.claim = regime.claim().into();
    rep.instance.x_size = f.x_len();
    rep.instance.y_size = f.y_len();
    let refs: Vec<&KCurve> = curves.iter().collect();
    annotate(&mut rep, &refs, cfg);
    Ok(rep)
}
