use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{k_lattice_with, KOptions, LatticeCouple, LatticeFunction};
use crate::Result;

/// Geometric `s`-grid: `count` points spanning `span_decades` decades, centred
/// at `‖f‖_{A₀}/‖f‖_{A₁}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub count: usize,
    pub span_decades: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { count: 512, span_decades: 6.0 }
    }
}

/// Samples of `s ↦ K(s, f; A₀, A₁)` together with the caps `(‖f‖_{A₀}, ‖f‖_{A₁})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KCurve {
    pub couple: String,
    pub caps: [f64; 2],
    /// `[s, K(s)]`, `s` strictly increasing.
    pub samples: Vec<[f64; 2]>,
    pub method: String,
    pub heuristic: bool,
}

impl KCurve {
    pub fn s_min(&self) -> f64 {
        self.samples.first().map_or(0.0, |p| p[0])
    }

    pub fn s_max(&self) -> f64 {
        self.samples.last().map_or(0.0, |p| p[0])
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|p| p[1] == 0.0)
    }

    pub fn to_json(&self) -> Result<String> {
        crate::report::to_json_string(self)
    }
}

/// Samples the K-functional on the grid. For `(L¹, L^∞)` and its swap the
/// kinks are inserted so that linear interpolation between samples is exact.
pub fn k_curve(f: &LatticeFunction, couple: &LatticeCouple, grid: GridSpec, opts: &KOptions) -> Result<KCurve> {
    let a0 = f.norm(&couple.a0)?;
    let a1 = f.norm(&couple.a1)?;
    let center = if a0 > 0.0 && a1 > 0.0 && (a0 / a1).is_finite() { a0 / a1 } else { 1.0 };
    let count = grid.count.max(2);
    let half = grid.span_decades / 2.0;
    let mut grid_s: Vec<f64> = (0..count)
        .map(|k| center * 10f64.powf(-half + grid.span_decades * k as f64 / (count - 1) as f64))
        .collect();
    if couple.is_l1_linf() || couple.is_linf_l1() {
        let (lo, hi) = (grid_s[0], grid_s[count - 1]);
        let mut cum = 0.0;
        for l in f.flattened().canonical() {
            cum += l.mass;
            let kink = if couple.is_l1_linf() { cum } else { 1.0 / cum };
            if kink > lo && kink < hi {
                grid_s.push(kink);
            }
        }
        grid_s.sort_by(f64::total_cmp);
        grid_s.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs());
    }
    let mut samples = Vec::with_capacity(grid_s.len());
    let mut method = "exact";
    let mut heuristic = false;
    if f.is_zero() {
        samples.extend(grid_s.iter().map(|&s| [s, 0.0]));
    } else {
        let first = k_lattice_with(f, couple, grid_s[0], opts, None)?;
        method = first.method;
        heuristic = first.heuristic;
        samples.push([grid_s[0], first.value]);
        if first.method == "descent" {
            let mut warm = first.point;
            for &s in &grid_s[1..] {
                let k = k_lattice_with(f, couple, s, opts, Some(&warm))?;
                samples.push([s, k.value]);
                warm = k.point;
            }
        } else {
            let rest: Vec<Result<f64>> =
                grid_s[1..].par_iter().map(|&s| k_lattice_with(f, couple, s, opts, None).map(|k| k.value)).collect();
            for (s, k) in grid_s[1..].iter().zip(rest) {
                samples.push([*s, k?]);
            }
        }
    }
    Ok(KCurve { couple: couple.descriptor(), caps: [a0, a1], samples, method: method.to_string(), heuristic })
}
