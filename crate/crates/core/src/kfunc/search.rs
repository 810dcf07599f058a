//! Minimisation of `‖f₀‖_{A₀} + s‖f₁‖_{A₁}` over box-constrained split variables.

use rayon::prelude::*;

use super::lattice::{Evaluator, LatticeCouple, Shape};
use crate::{Error, Result};

/// A box-constrained objective `Φ(u)`, `0 ≤ u_i ≤ upper_i`.
pub(crate) trait Problem: Sync {
    fn upper(&self) -> &[f64];
    fn evaluator(&self) -> Evaluator;
    fn eval(&self, ev: &mut Evaluator, u: &[f64]) -> f64;
    /// Extra candidate points tried by both search methods.
    fn seeds(&self) -> Vec<Vec<f64>>;
    /// One-parameter families used as descent starts, indexed by `which`.
    fn family(&self, which: usize, lambda: f64) -> Vec<f64>;
    fn family_count(&self) -> usize;
    /// Natural breakpoints of the families.
    fn breakpoints(&self) -> Vec<f64>;

    fn dim(&self) -> usize {
        self.upper().len()
    }
}

/// Pointwise split `f₀ = u`, `f₁ = f − u` over the atoms where `f > 0`.
pub(crate) struct PointwiseSplit<'a> {
    pub couple: &'a LatticeCouple,
    pub s: f64,
    pub values: Vec<f64>,
    pub shape: Shape,
    free: Vec<usize>,
    upper: Vec<f64>,
}

impl<'a> PointwiseSplit<'a> {
    pub fn new(couple: &'a LatticeCouple, s: f64, values: Vec<f64>, shape: Shape) -> Self {
        let free: Vec<usize> = (0..values.len()).filter(|&i| values[i] > 0.0).collect();
        let upper = free.iter().map(|&i| values[i]).collect();
        Self { couple, s, values, shape, free, upper }
    }

    fn split(&self, u: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut f0 = vec![0.0; self.values.len()];
        let mut f1 = f0.clone();
        for (k, &i) in self.free.iter().enumerate() {
            let a = u[k].clamp(0.0, self.values[i]);
            f0[i] = a;
            f1[i] = self.values[i] - a;
        }
        (f0, f1)
    }
}

impl Problem for PointwiseSplit<'_> {
    fn upper(&self) -> &[f64] {
        &self.upper
    }

    fn evaluator(&self) -> Evaluator {
        Evaluator::new(self.shape.clone())
    }

    fn eval(&self, ev: &mut Evaluator, u: &[f64]) -> f64 {
        let (f0, f1) = self.split(u);
        let a = ev.eval(&self.couple.a0, &f0);
        if self.s == 0.0 {
            return a;
        }
        a + self.s * ev.eval(&self.couple.a1, &f1)
    }

    fn seeds(&self) -> Vec<Vec<f64>> {
        vec![vec![0.0; self.dim()], self.upper.clone()]
    }

    fn family(&self, which: usize, lambda: f64) -> Vec<f64> {
        self.upper
            .iter()
            .map(|&b| if which == 0 { b.min(lambda) } else { (b - lambda).max(0.0) })
            .collect()
    }

    fn family_count(&self) -> usize {
        2
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.upper.clone()
    }
}

/// Joint couple `(O₀(X; L¹(Y)), O₁(X; L^∞(Y)))` on a product grid.
///
/// For a fixed bound `λ_x = ‖f₁(x,·)‖_∞` the pointwise smallest `f₀(x,·)` is
/// `(F(x,·) − λ_x)_+`, and both outer norms are monotone, so the infimum is
/// attained on `f₁ = min(F, λ_x)` and the problem reduces to one variable per
/// `x`-atom: `O₀(x ↦ Σ_y μ_y (F(x,y) − λ_x)_+) + s·O₁(x ↦ λ_x)`.
pub(crate) struct SliceTruncation<'a> {
    pub outer0: &'a super::LatticeNorm,
    pub outer1: &'a super::LatticeNorm,
    pub s: f64,
    pub values: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    upper: Vec<f64>,
}

impl<'a> SliceTruncation<'a> {
    pub fn new(
        outer0: &'a super::LatticeNorm,
        outer1: &'a super::LatticeNorm,
        s: f64,
        values: Vec<f64>,
        x: Vec<f64>,
        y: Vec<f64>,
    ) -> Self {
        let ny = y.len();
        let upper = (0..x.len())
            .map(|i| values[i * ny..(i + 1) * ny].iter().zip(&y).filter(|(_, m)| **m > 0.0).map(|(v, _)| *v).fold(0.0, f64::max))
            .collect();
        Self { outer0, outer1, s, values, x, y, upper }
    }

    fn row(&self, i: usize) -> &[f64] {
        let ny = self.y.len();
        &self.values[i * ny..(i + 1) * ny]
    }
}

impl Problem for SliceTruncation<'_> {
    fn upper(&self) -> &[f64] {
        &self.upper
    }

    fn evaluator(&self) -> Evaluator {
        Evaluator::new(Shape::Plain(self.x.clone()))
    }

    fn eval(&self, ev: &mut Evaluator, u: &[f64]) -> f64 {
        let excess: Vec<f64> = (0..self.x.len())
            .map(|i| {
                let l = u[i].clamp(0.0, self.upper[i]);
                self.row(i).iter().zip(&self.y).map(|(v, m)| m * (v - l).max(0.0)).sum()
            })
            .collect();
        let a = ev.eval(self.outer0, &excess);
        if self.s == 0.0 {
            return a;
        }
        let caps: Vec<f64> = u.iter().zip(&self.upper).map(|(l, b)| l.clamp(0.0, *b)).collect();
        a + self.s * ev.eval(self.outer1, &caps)
    }

    /// Includes the slice-wise optimum `λ_x = F(x,·)*(s)`.
    fn seeds(&self) -> Vec<Vec<f64>> {
        let per_slice = (0..self.x.len())
            .map(|i| {
                let mut pairs: Vec<(f64, f64)> =
                    self.row(i).iter().copied().zip(self.y.iter().copied()).filter(|p| p.1 > 0.0).collect();
                pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
                let mut cum = 0.0;
                for (v, m) in pairs {
                    cum += m;
                    if cum > self.s {
                        return v;
                    }
                }
                0.0
            })
            .collect();
        vec![vec![0.0; self.dim()], self.upper.clone(), per_slice]
    }

    fn family(&self, _which: usize, lambda: f64) -> Vec<f64> {
        self.upper.iter().map(|b| b.min(lambda)).collect()
    }

    fn family_count(&self) -> usize {
        1
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.values.clone();
        b.extend_from_slice(&self.upper);
        b
    }
}

/// Settings of the exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BruteConfig {
    /// Grid resolution per variable (split fractions `k/resolution`).
    pub resolution: usize,
    /// Cap on the number of coarse grid points; the per-variable resolution is lowered to fit.
    pub budget: usize,
    /// Refine the best coarse point by halving-step pattern search until the step is negligible.
    pub refine: bool,
    /// Largest number of free variables accepted.
    pub max_dim: usize,
}

impl Default for BruteConfig {
    fn default() -> Self {
        Self { resolution: 64, budget: 1 << 16, refine: true, max_dim: 8 }
    }
}

impl BruteConfig {
    /// Per-variable resolution actually used for `dim` variables.
    pub fn effective_resolution(&self, dim: usize) -> usize {
        if dim == 0 {
            return self.resolution;
        }
        let mut r = self.resolution.max(1);
        while r > 1 && (r as f64 + 1.0).powi(dim as i32) > self.budget as f64 {
            r -= 1;
        }
        r
    }
}

pub(crate) struct Found {
    pub value: f64,
    pub point: Vec<f64>,
}

fn better(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

/// Exhaustive grid search followed by pattern-search refinement.
pub(crate) fn brute<P: Problem>(problem: &P, cfg: &BruteConfig) -> Result<Found> {
    let n = problem.dim();
    if n > cfg.max_dim {
        return Err(Error::TooManyAtoms { atoms: n, limit: cfg.max_dim });
    }
    let upper = problem.upper();
    if n == 0 {
        let mut ev = problem.evaluator();
        return Ok(Found { value: problem.eval(&mut ev, &[]), point: Vec::new() });
    }
    let res = cfg.effective_resolution(n);
    let total = (res + 1).pow(n as u32);
    let decode = |mut k: usize, out: &mut [f64]| {
        for (i, o) in out.iter_mut().enumerate() {
            let d = k % (res + 1);
            k /= res + 1;
            *o = if d == res { upper[i] } else { upper[i] * d as f64 / res as f64 };
        }
    };
    let (value, index) = (0..total)
        .into_par_iter()
        .fold(
            || (problem.evaluator(), vec![0.0; n], (f64::INFINITY, usize::MAX)),
            |(mut ev, mut u, best), k| {
                decode(k, &mut u);
                let v = problem.eval(&mut ev, &u);
                (ev, u, better(best, (v, k)))
            },
        )
        .map(|(_, _, b)| b)
        .reduce(|| (f64::INFINITY, usize::MAX), better);
    let mut point = vec![0.0; n];
    decode(index, &mut point);
    let mut best = Found { value, point };
    let mut ev = problem.evaluator();
    for seed in problem.seeds() {
        let v = problem.eval(&mut ev, &seed);
        if v < best.value {
            best = Found { value: v, point: seed };
        }
    }
    if cfg.refine {
        refine(problem, &mut ev, &mut best, res);
    }
    Ok(best)
}

/// Polls all `3ⁿ − 1` neighbours at a common absolute step, moving to the best
/// improving one; halves the step when none improves.
fn refine<P: Problem>(problem: &P, ev: &mut Evaluator, best: &mut Found, res: usize) {
    let upper = problem.upper();
    let n = upper.len();
    let top = upper.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return;
    }
    let mut h = top / res as f64;
    let floor = 1e-12 * top;
    let stencil = 3usize.pow(n as u32);
    let mut trial = vec![0.0; n];
    let mut moves = 0usize;
    while h > floor && moves < 200_000 {
        let mut step_best: Option<(f64, Vec<f64>)> = None;
        for k in 0..stencil {
            if k == (stencil - 1) / 2 {
                continue; // all-zero offset
            }
            let mut c = k;
            for i in 0..n {
                let d = (c % 3) as f64 - 1.0;
                c /= 3;
                trial[i] = (best.point[i] + d * h).clamp(0.0, upper[i]);
            }
            let v = problem.eval(ev, &trial);
            if v < best.value && step_best.as_ref().is_none_or(|(b, _)| v < *b) {
                step_best = Some((v, trial.clone()));
            }
        }
        match step_best {
            Some((v, p)) => {
                best.value = v;
                best.point = p;
                moves += 1;
            }
            None => h *= 0.5,
        }
    }
}

/// Golden-section minimisation of a unimodal-looking `g` on `[a, b]`.
fn golden(mut a: f64, mut b: f64, tol: f64, mut g: impl FnMut(f64) -> f64) -> (f64, f64) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if (b - a) <= tol {
            break;
        }
        if gc <= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + phi * (b - a);
            gd = g(d);
        }
    }
    if gc <= gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

/// Minimises `g` over `[0, b]`: uniform scan, then golden section around the best node.
fn line_min(b: f64, extra: &[f64], mut g: impl FnMut(f64) -> f64) -> (f64, f64) {
    const NODES: usize = 32;
    if b <= 0.0 {
        return (0.0, g(0.0));
    }
    let mut pts: Vec<f64> = (0..=NODES).map(|k| b * k as f64 / NODES as f64).collect();
    pts.extend(extra.iter().copied().filter(|x| *x > 0.0 && *x < b));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let vals: Vec<f64> = pts.iter().map(|&x| g(x)).collect();
    let mut k = 0;
    for i in 1..vals.len() {
        if vals[i] < vals[k] {
            k = i;
        }
    }
    let lo = pts[k.saturating_sub(1)];
    let hi = pts[(k + 1).min(pts.len() - 1)];
    let (x, v) = golden(lo, hi, 1e-13 * b, &mut g);
    if v < vals[k] {
        (x, v)
    } else {
        (pts[k], vals[k])
    }
}

/// Cyclic coordinate descent from the corners, the truncation families and any
/// seeds or warm start; returns the best point found.
pub(crate) fn descent<P: Problem>(problem: &P, warm: Option<&[f64]>) -> Found {
    let n = problem.dim();
    let mut ev = problem.evaluator();
    if n == 0 {
        return Found { value: problem.eval(&mut ev, &[]), point: Vec::new() };
    }
    let upper = problem.upper().to_vec();
    let top = upper.iter().copied().fold(0.0, f64::max);
    let breaks = problem.breakpoints();
    let mut starts = problem.seeds();
    for which in 0..problem.family_count() {
        let (lambda, _) = line_min(top, &breaks, |l| problem.eval(&mut ev, &problem.family(which, l)));
        starts.push(problem.family(which, lambda));
    }
    if let Some(w) = warm.filter(|w| w.len() == n) {
        starts.push(w.to_vec());
    }
    let mut best = Found { value: f64::INFINITY, point: vec![0.0; n] };
    for start in starts {
        let mut u = start;
        let mut value = problem.eval(&mut ev, &u);
        for _sweep in 0..200 {
            let before = value;
            for i in 0..n {
                let keep = u[i];
                let (x, v) = line_min(upper[i], &breaks, |t| {
                    u[i] = t;
                    problem.eval(&mut ev, &u)
                });
                if v < value {
                    u[i] = x;
                    value = v;
                } else {
                    u[i] = keep;
                }
            }
            if !(before - value > 1e-15 * before.abs()) {
                break;
            }
        }
        if value < best.value {
            best = Found { value, point: u };
        }
    }
    polish(problem, &mut ev, &upper, &breaks, &mut best);
    best
}

/// Line search from `u` along `dir`, keeping the point inside the box.
fn move_along<P: Problem>(
    problem: &P,
    ev: &mut Evaluator,
    upper: &[f64],
    breaks: &[f64],
    u: &mut [f64],
    value: &mut f64,
    dir: &[(usize, f64)],
) {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for &(i, d) in dir {
        let (a, b) = ((0.0 - u[i]) / d, (upper[i] - u[i]) / d);
        lo = lo.max(a.min(b));
        hi = hi.min(a.max(b));
    }
    if !(hi > lo) {
        return;
    }
    let start: Vec<f64> = dir.iter().map(|&(i, _)| u[i]).collect();
    let shifted: Vec<f64> = dir
        .iter()
        .zip(&start)
        .flat_map(|(&(_, d), &s0)| breaks.iter().map(move |b| (b - s0) / d - lo))
        .collect();
    let (x, v) = line_min(hi - lo, &shifted, |t| {
        for (k, &(i, d)) in dir.iter().enumerate() {
            u[i] = (start[k] + (lo + t) * d).clamp(0.0, upper[i]);
        }
        problem.eval(ev, u)
    });
    if v < *value {
        for (k, &(i, d)) in dir.iter().enumerate() {
            u[i] = (start[k] + (lo + x) * d).clamp(0.0, upper[i]);
        }
        *value = v;
    } else {
        for (k, &(i, _)) in dir.iter().enumerate() {
            u[i] = start[k];
        }
    }
}

/// Escapes the kinks where coordinate descent stalls: tied atoms are moved
/// together and every pair is searched along `e_i ± e_j`, alternating with
/// coordinate sweeps until nothing improves.
fn polish<P: Problem>(problem: &P, ev: &mut Evaluator, upper: &[f64], breaks: &[f64], best: &mut Found) {
    let n = upper.len();
    let mut u = best.point.clone();
    let mut value = best.value;
    for _round in 0..50 {
        let before = value;
        for rest in [false, true] {
            let key = |i: usize, u: &[f64]| if rest { upper[i] - u[i] } else { u[i] };
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| key(a, &u).total_cmp(&key(b, &u)));
            let mut k = 0;
            while k < n {
                let mut m = k + 1;
                while m < n && (key(order[m], &u) - key(order[k], &u)).abs() <= 1e-12 * upper[order[k]].max(1e-300) {
                    m += 1;
                }
                if m - k > 1 {
                    let dir: Vec<(usize, f64)> = order[k..m].iter().map(|&i| (i, if rest { -1.0 } else { 1.0 })).collect();
                    move_along(problem, ev, upper, breaks, &mut u, &mut value, &dir);
                }
                k = m;
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for sign in [1.0, -1.0] {
                    move_along(problem, ev, upper, breaks, &mut u, &mut value, &[(i, 1.0), (j, sign)]);
                }
            }
        }
        for i in 0..n {
            move_along(problem, ev, upper, breaks, &mut u, &mut value, &[(i, 1.0)]);
        }
        if !(before - value > 1e-15 * before.abs()) {
            break;
        }
    }
    if value < best.value {
        *best = Found { value, point: u };
    }
}
