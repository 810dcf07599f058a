use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::verdict::{minkowski_ratio, MinkowskiVerdict};
use crate::lorentz::{ExponentPair, LorentzAccumulator, MeasureSpace, ProductStepFunction};
use crate::{Error, Result};

/// The four counterexample families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// `1_{x^α y ≤ 1}` on `[0,1] × ℝ₊`, `α ↑ p`.
    F41,
    /// `N` disjoint translates of an indicator.
    F42,
    /// `2N+1` translates of `φ(z) = (2+|z|)^{-1} log(2+|z|)^{-β}`, `β ∈ (1/r, 1)`.
    F43,
    /// The same construction with `β > 1/r`.
    F44,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::F41, Family::F42, Family::F43, Family::F44];

    pub fn label(&self) -> &'static str {
        match self {
            Self::F41 => "4.1",
            Self::F42 => "4.2",
            Self::F43 => "4.3",
            Self::F44 => "4.4",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().trim_start_matches(['F', 'f']) {
            "4.1" | "41" => Ok(Self::F41),
            "4.2" | "42" => Ok(Self::F42),
            "4.3" | "43" => Ok(Self::F43),
            "4.4" | "44" => Ok(Self::F44),
            other => Err(Error::InvalidParameter(format!("unknown family `{other}` (expected 4.1, 4.2, 4.3 or 4.4)"))),
        }
    }
}

/// Grid for the translated-`φ` families: `φ` is cut to `[−L, L]` with
/// `L = l_factor·N` and sampled at the midpoints of cells of width `1/cells_per_unit`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Discretization {
    pub l_factor: f64,
    pub cells_per_unit: usize,
}

impl Default for Discretization {
    fn default() -> Self {
        Self { l_factor: 16.0, cells_per_unit: 16 }
    }
}

impl Discretization {
    pub fn half_width(&self, n: u64) -> u64 {
        ((self.l_factor * n as f64).round() as u64).max(1)
    }

    pub fn step(&self) -> f64 {
        1.0 / self.cells_per_unit as f64
    }

    pub fn finer(&self) -> Self {
        Self { cells_per_unit: self.cells_per_unit * 2, ..*self }
    }

    pub fn wider(&self) -> Self {
        Self { l_factor: self.l_factor * 2.0, ..*self }
    }
}

/// Parameters of one family member.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FamilyParams {
    F41 { alpha: f64 },
    F42 { n: u64 },
    F43 { n: u64, beta: f64, disc: Discretization },
    F44 { n: u64, beta: f64, disc: Discretization },
}

impl FamilyParams {
    pub fn family(&self) -> Family {
        match self {
            Self::F41 { .. } => Family::F41,
            Self::F42 { .. } => Family::F42,
            Self::F43 { .. } => Family::F43,
            Self::F44 { .. } => Family::F44,
        }
    }

    fn validate(&self, e: ExponentPair) -> Result<()> {
        let bad = |m: String| Err(Error::Hypothesis(m));
        match *self {
            Self::F41 { alpha } => {
                if e.p().is_infinite() {
                    return bad("family 4.1 needs p < ∞".into());
                }
                if !(alpha > 0.0 && alpha < e.p()) {
                    return bad(format!("family 4.1 needs 0 < α < p, got α = {alpha}, p = {}", e.p()));
                }
            }
            Self::F42 { n: 0 } => return bad("N must be positive".into()),
            Self::F43 { n, beta, disc } | Self::F44 { n, beta, disc } => {
                if n == 0 || disc.cells_per_unit == 0 || !(disc.l_factor > 0.0) {
                    return bad("N, L and the cell count must be positive".into());
                }
                if e.p().is_infinite() {
                    return bad("the translated-φ families need p < ∞".into());
                }
                let lo = 1.0 / e.r();
                if !(beta > lo) {
                    return bad(format!("β = {beta} must exceed 1/r = {lo}"));
                }
                if self.family() == Family::F43 && !(beta < 1.0) {
                    return bad(format!("family 4.3 needs β ∈ (1/r, 1), got β = {beta}"));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// F41 in closed form: `rhs = p/(p−α)·r^{-1/r}`, `lhs = (r(p−α)/p)^{-1/r}`.
pub fn f41_sides(e: ExponentPair, alpha: f64) -> (f64, f64) {
    let (p, r) = (e.p(), e.r());
    let gap = (p - alpha) / p;
    if r.is_infinite() {
        (1.0, 1.0 / gap)
    } else {
        ((r * gap).powf(-1.0 / r), r.powf(-1.0 / r) / gap)
    }
}

/// `N` unit cells of `Y`, one per `x`-atom: `F(x, y) = φ(y − x)` with `φ` the indicator of a unit cell.
pub fn f42_function(n: u64) -> Result<ProductStepFunction> {
    let n = n as usize;
    let y = MeasureSpace::interval(n as f64, n)?;
    ProductStepFunction::from_fn(MeasureSpace::counting(n), y, |i, j| if i == j { 1.0 } else { 0.0 })
}

/// `φ(z) = (2+|z|)^{-1} log(2+|z|)^{-β}`.
pub fn phi(z: f64, beta: f64) -> f64 {
    let t = 2.0 + z.abs();
    1.0 / (t * t.ln().powf(beta))
}

/// `‖φ_L‖_{p,r}` for the cut and sampled `φ`.
fn phi_norm(beta: f64, l: u64, k: usize, e: ExponentPair) -> f64 {
    let h = 1.0 / k as f64;
    let cells = l * k as u64;
    let mut acc = LorentzAccumulator::new(e, 2.0 * l as f64);
    for c in 0..cells {
        acc.push(phi((c as f64 + 0.5) * h, beta), 2.0 * h);
    }
    acc.finish()
}

/// Running window sum `S(m) = Σ_{t=m−N}^{m+N} a(t)` for one sub-cell offset `δ`,
/// `a(t) = φ(|t+δ|)` when `|t+δ| < L`. Nonincreasing in `m ≥ 0`.
struct Window {
    n: i64,
    l: f64,
    delta: f64,
    beta: f64,
    m: i64,
    last: i64,
    sum: f64,
    comp: f64,
}

impl Window {
    fn new(n: u64, l: u64, delta: f64, beta: f64) -> Self {
        let n = n as i64;
        let mut w = Self { n, l: l as f64, delta, beta, m: 0, last: n + l as i64, sum: 0.0, comp: 0.0 };
        for t in -n..=n {
            let a = w.a(t);
            w.add(a);
        }
        w
    }

    fn a(&self, t: i64) -> f64 {
        let z = (t as f64 + self.delta).abs();
        if z < self.l {
            phi(z, self.beta)
        } else {
            0.0
        }
    }

    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Current value, then moves to `m + 1`; `None` once past the support.
    fn next(&mut self) -> Option<f64> {
        if self.m > self.last {
            return None;
        }
        let v = self.value().max(0.0);
        let (enter, leave) = (self.a(self.m + 1 + self.n), self.a(self.m - self.n));
        self.add(enter);
        self.add(-leave);
        self.m += 1;
        Some(v)
    }
}

struct Head(f64, usize);

impl PartialEq for Head {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Head {}
impl PartialOrd for Head {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Head {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0).then_with(|| o.1.cmp(&self.1))
    }
}

/// `(lhs, rhs)` for the translated-`φ` construction on the cut grid.
///
/// `Σ_x φ(y − x)` is even in `y`; on `y ≥ 0` each of the `k` sub-cell offsets
/// gives a nonincreasing sequence, so a `k`-way merge streams the whole
/// function in decreasing order into the accumulator without sorting.
pub fn translated_phi_sides(n: u64, beta: f64, disc: Discretization, e: ExponentPair) -> (f64, f64) {
    let k = disc.cells_per_unit;
    let l = disc.half_width(n);
    let h = disc.step();
    let rhs = (2 * n + 1) as f64 * phi_norm(beta, l, k, e);
    let mut windows: Vec<Window> = (0..k).map(|o| Window::new(n, l, (o as f64 + 0.5) * h, beta)).collect();
    let mut heap = BinaryHeap::with_capacity(k);
    for (o, w) in windows.iter_mut().enumerate() {
        if let Some(v) = w.next() {
            heap.push(Head(v, o));
        }
    }
    let mut acc = LorentzAccumulator::new(e, 2.0 * (n + l + 1) as f64);
    while let Some(Head(v, o)) = heap.pop() {
        acc.push(v, 2.0 * h);
        if let Some(next) = windows[o].next() {
            heap.push(Head(next, o));
        }
    }
    (acc.finish(), rhs)
}

/// Evaluates one family member.
pub fn family_eval(fp: FamilyParams, e: ExponentPair) -> Result<MinkowskiVerdict> {
    fp.validate(e)?;
    let v = match fp {
        FamilyParams::F41 { alpha } => {
            let (lhs, rhs) = f41_sides(e, alpha);
            let mut v = MinkowskiVerdict::new(e, lhs, rhs, format!("family 4.1, alpha = {alpha}"));
            v.parameter = Some(e.p() - alpha);
            v
        }
        FamilyParams::F42 { n } => {
            let mut v = minkowski_ratio(&f42_function(n)?, e);
            v.descriptor = format!("family 4.2, N = {n}");
            v.parameter = Some(n as f64);
            v
        }
        FamilyParams::F43 { n, beta, disc } | FamilyParams::F44 { n, beta, disc } => {
            let (lhs, rhs) = translated_phi_sides(n, beta, disc, e);
            let mut v = MinkowskiVerdict::new(e, lhs, rhs, format!("family {}, N = {n}, beta = {beta}", fp.family()));
            v.parameter = Some(n as f64);
            v.discretization = Some(json!({
                "L": disc.half_width(n),
                "h": disc.step(),
                "lFactor": disc.l_factor,
                "cellsPerUnit": disc.cells_per_unit,
                "cut": "phi supported in [-L, L]",
            }));
            v
        }
    };
    Ok(v)
}

/// [`family_eval`] plus the refinement delta: the largest relative change of
/// the ratio when the cell width is halved or `L` doubled (translated-`φ` families only).
pub fn family_eval_refined(fp: FamilyParams, e: ExponentPair) -> Result<MinkowskiVerdict> {
    let mut v = family_eval(fp, e)?;
    let refined = |d: Discretization| -> Result<f64> {
        let p = match fp {
            FamilyParams::F43 { n, beta, .. } => FamilyParams::F43 { n, beta, disc: d },
            FamilyParams::F44 { n, beta, .. } => FamilyParams::F44 { n, beta, disc: d },
            other => other,
        };
        Ok(family_eval(p, e)?.ratio)
    };
    if let FamilyParams::F43 { disc, .. } | FamilyParams::F44 { disc, .. } = fp {
        let a = (refined(disc.finer())? / v.ratio - 1.0).abs();
        let b = (refined(disc.wider())? / v.ratio - 1.0).abs();
        v.refinement_delta = Some(a.max(b));
    } else {
        v.refinement_delta = Some(0.0);
    }
    Ok(v)
}
