use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::family::{family_eval, Discretization, Family, FamilyParams};
use super::fit::{rate_fit, RateFit, RateModel};
use super::verdict::{minkowski_ratio, Direction};
use crate::lorentz::{ExponentPair, MeasureSpace, ProductStepFunction};
use crate::report::{csv_f64, ext_f64};
use crate::{Error, Result};

/// Exponent values of a sweep; cells are all `(p, r)` combinations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneGrid {
    pub p: Vec<f64>,
    pub r: Vec<f64>,
}

impl Default for PlaneGrid {
    fn default() -> Self {
        let axis: Vec<f64> = (1..=16).map(|k| k as f64 * 0.25).collect();
        Self { p: axis.clone(), r: axis }
    }
}

fn parse_value(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "∞" | "infinity" => Ok(f64::INFINITY),
        t => t.parse().map_err(|_| Error::InvalidParameter(format!("`{t}` is not a number"))),
    }
}

fn parse_item(s: &str, out: &mut Vec<f64>) -> Result<()> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => out.push(parse_value(v)?),
        [a, b, step] => {
            let (a, b, step) = (parse_value(a)?, parse_value(b)?, parse_value(step)?);
            if !(step > 0.0) || !a.is_finite() || !b.is_finite() || b < a {
                return Err(Error::InvalidParameter(format!("bad range `{s}` (expected start:end:step)")));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize;
            out.extend((0..=count).map(|k| a + k as f64 * step));
        }
        _ => return Err(Error::InvalidParameter(format!("bad grid item `{s}`"))),
    }
    Ok(())
}

impl PlaneGrid {
    /// Parses `p=0.25:4:0.25,r=1,2,inf`: `start:end:step` ranges and plain
    /// values; a bare item continues the list of the last named axis.
    pub fn parse(spec: &str) -> Result<Self> {
        let (mut p, mut r) = (Vec::new(), Vec::new());
        let mut current: Option<char> = None;
        for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let item = match token.split_once('=') {
                Some((key, rest)) => {
                    current = match key.trim() {
                        "p" => Some('p'),
                        "r" => Some('r'),
                        k => return Err(Error::InvalidParameter(format!("unknown grid axis `{k}`"))),
                    };
                    rest
                }
                None => token,
            };
            match current {
                Some('p') => parse_item(item, &mut p)?,
                Some('r') => parse_item(item, &mut r)?,
                _ => return Err(Error::InvalidParameter(format!("grid value `{token}` before any axis name"))),
            }
        }
        if p.is_empty() || r.is_empty() {
            return Err(Error::InvalidParameter("grid needs values for both p and r".into()));
        }
        Ok(Self { p, r })
    }

    pub fn cells(&self) -> Vec<(f64, f64)> {
        self.p.iter().flat_map(|&p| self.r.iter().map(move |&r| (p, r))).collect()
    }
}

/// Random-instance counts and family ladders of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SampleSpec {
    pub families: Vec<Family>,
    /// Grid sizes `n` of the random `n × n` instances.
    pub sizes: Vec<usize>,
    /// Random instances per size.
    pub instances: usize,
    /// Family 4.1 gaps `ε = p − α`, as fractions of `p`.
    pub eps_ladder: Vec<f64>,
    /// Family 4.2 values of `N`.
    pub n_ladder: Vec<u64>,
    /// Families 4.3 and 4.4 values of `N`.
    pub log_ladder: Vec<u64>,
    pub discretization: Discretization,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self {
            families: Family::ALL.to_vec(),
            sizes: vec![4, 8, 16],
            instances: 24,
            eps_ladder: vec![0.1, 0.05, 0.025, 0.0125],
            n_ladder: vec![2, 4, 8, 16],
            log_ladder: (6..=10).map(|k| 1u64 << k).collect(),
            discretization: Discretization::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Holds,
    FailsEvidence,
    Inconclusive,
    Inadmissible,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Holds => "holds",
            Self::FailsEvidence => "fails-evidence",
            Self::Inconclusive => "inconclusive",
            Self::Inadmissible => "inadmissible",
        }
    }
}

/// Forward Minkowski holds exactly on the normable range.
pub fn forward_theory(e: ExponentPair) -> bool {
    e.is_normable()
}

/// Reverse Minkowski holds for `0 < p < 1, 0 < r ≤ 1` and for `p = r = 1`.
pub fn reverse_theory(e: ExponentPair) -> bool {
    let (p, r) = (e.p(), e.r());
    (p < 1.0 && r <= 1.0) || (p == 1.0 && r == 1.0)
}

/// A family ladder with its fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Ladder {
    pub family: Family,
    /// `(N or ε, ratio)`.
    pub points: Vec<(f64, f64)>,
    pub fit: Option<RateFit>,
}

impl Ladder {
    /// Growth exponent of the violation of the given inequality (positive = violation grows).
    pub fn growth(&self, d: Direction) -> f64 {
        let Some(fit) = &self.fit else { return 0.0 };
        // F41 ratios blow up as ε ↓ 0, i.e. for negative slopes.
        let forward = if self.family == Family::F41 { -fit.slope } else { fit.slope };
        match d {
            Direction::Forward => forward,
            Direction::Reverse => -forward,
        }
    }
}

/// One direction of one cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CellResult {
    #[serde(with = "ext_f64")]
    pub p: f64,
    #[serde(with = "ext_f64")]
    pub r: f64,
    pub direction: Direction,
    pub classification: Classification,
    /// Largest forward ratio, or smallest reverse ratio, over samples and ladders.
    #[serde(with = "ext_f64")]
    pub extreme_ratio: f64,
    /// Ladder parameter (`N` or `ε`) or instance size at the extreme.
    pub extreme_at: Option<f64>,
    pub evidence_family: Option<Family>,
    pub growth: Option<f64>,
    pub residual: Option<f64>,
    /// Largest adverse relative change of the per-size extreme across size doubling.
    pub drift: Option<f64>,
    /// Extreme ratio per random-instance size.
    pub per_size: Vec<f64>,
    pub theory_holds: Option<bool>,
    pub consistent: bool,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CellEvidence {
    #[serde(with = "ext_f64")]
    pub p: f64,
    #[serde(with = "ext_f64")]
    pub r: f64,
    pub ladders: Vec<Ladder>,
    pub rows: Vec<CellResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RegionMap {
    pub seed: u64,
    pub grid: PlaneGrid,
    pub samples: SampleSpec,
    pub cells: Vec<CellEvidence>,
}

/// Drift threshold for "holds".
pub const DRIFT_LIMIT: f64 = 0.05;
/// Growth exponent and residual thresholds for "fails-evidence".
pub const GROWTH_LIMIT: f64 = 0.1;
pub const RESIDUAL_LIMIT: f64 = 0.05;

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the random instances of one cell and size.
pub fn cell_seed(seed: u64, cell: usize, size: usize) -> u64 {
    mix(mix(mix(seed) ^ cell as u64) ^ size as u64)
}

/// An `n × n` instance: masses uniform in `[0.05, 1)`, values log-uniform in `[10⁻³, 10³]`.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> ProductStepFunction {
    let masses = |rng: &mut ChaCha8Rng| (0..n).map(|_| rng.gen_range(0.05..1.0)).collect::<Vec<f64>>();
    let x = MeasureSpace::discrete(masses(rng)).expect("positive masses");
    let y = MeasureSpace::discrete(masses(rng)).expect("positive masses");
    let values = (0..n * n).map(|_| 10f64.powf(rng.gen_range(-3.0..=3.0))).collect();
    ProductStepFunction::new(x, y, values).expect("valid grid")
}

fn ladders(e: ExponentPair, spec: &SampleSpec) -> Vec<Ladder> {
    let mut out = Vec::new();
    let (p, r) = (e.p(), e.r());
    let mut run = |family: Family, model: RateModel, members: Vec<(f64, FamilyParams)>| {
        let points: Vec<(f64, f64)> = members
            .into_iter()
            .filter_map(|(t, fp)| family_eval(fp, e).ok().map(|v| (t, v.ratio)))
            .collect();
        let mut sorted = points.clone();
        if model == RateModel::PowerOfEps {
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
        let fit = rate_fit(&sorted, model).ok();
        out.push(Ladder { family, points, fit });
    };
    for &family in &spec.families {
        match family {
            Family::F41 if p.is_finite() => run(
                family,
                RateModel::PowerOfEps,
                spec.eps_ladder.iter().map(|&f| (f * p, FamilyParams::F41 { alpha: p - f * p })).collect(),
            ),
            Family::F42 => run(
                family,
                RateModel::PowerOfN,
                spec.n_ladder.iter().map(|&n| (n as f64, FamilyParams::F42 { n })).collect(),
            ),
            Family::F43 if p == 1.0 && r > 1.0 => {
                let beta = (1.0 / r + 1.0) / 2.0;
                let disc = spec.discretization;
                run(
                    family,
                    RateModel::PowerOfLogN,
                    spec.log_ladder.iter().map(|&n| (n as f64, FamilyParams::F43 { n, beta, disc })).collect(),
                )
            }
            Family::F44 if p == 1.0 && r < 1.0 => {
                let beta = 1.0 / r + 0.05;
                let disc = spec.discretization;
                run(
                    family,
                    RateModel::PowerOfLogN,
                    spec.log_ladder.iter().map(|&n| (n as f64, FamilyParams::F44 { n, beta, disc })).collect(),
                )
            }
            _ => {}
        }
    }
    out
}

fn classify(
    e: ExponentPair,
    d: Direction,
    per_size: &[(usize, f64)],
    ladders: &[Ladder],
) -> CellResult {
    let forward = d == Direction::Forward;
    let worse = |a: f64, b: f64| if forward { a > b } else { a < b };
    let mut extreme = if forward { f64::NEG_INFINITY } else { f64::INFINITY };
    let mut extreme_at = None;
    for &(n, v) in per_size {
        if worse(v, extreme) {
            extreme = v;
            extreme_at = Some(n as f64);
        }
    }
    for l in ladders {
        for &(t, v) in &l.points {
            if worse(v, extreme) {
                extreme = v;
                extreme_at = Some(t);
            }
        }
    }
    let drift = per_size
        .windows(2)
        .map(|w| if forward { w[1].1 / w[0].1 - 1.0 } else { w[0].1 / w[1].1 - 1.0 })
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
    let best = ladders
        .iter()
        .filter(|l| l.fit.is_some())
        .max_by(|a, b| a.growth(d).total_cmp(&b.growth(d)));
    let evidence = ladders
        .iter()
        .filter(|l| l.fit.as_ref().is_some_and(|f| f.max_residual < RESIDUAL_LIMIT) && l.growth(d) > GROWTH_LIMIT)
        .max_by(|a, b| a.growth(d).total_cmp(&b.growth(d)));
    let any_growth = best.is_some_and(|l| l.growth(d) > GROWTH_LIMIT);
    let theory = if forward { forward_theory(e) } else { reverse_theory(e) };
    let (classification, evidence_family, growth, residual) = match evidence {
        Some(l) => {
            let at = l
                .points
                .iter()
                .copied()
                .reduce(|a, b| if worse(b.1, a.1) { b } else { a })
                .map(|x| x.0);
            extreme_at = at.or(extreme_at);
            if let Some(v) = l.points.iter().map(|x| x.1).reduce(|a, b| if worse(b, a) { b } else { a }) {
                extreme = v;
            }
            (Classification::FailsEvidence, Some(l.family), Some(l.growth(d)), l.fit.as_ref().map(|f| f.max_residual))
        }
        None => {
            let stable = drift.is_some_and(|x| x < DRIFT_LIMIT);
            let c = if stable && !any_growth { Classification::Holds } else { Classification::Inconclusive };
            (c, None, best.map(|l| l.growth(d)), best.and_then(|l| l.fit.as_ref().map(|f| f.max_residual)))
        }
    };
    let consistent = match classification {
        Classification::Holds => theory,
        Classification::FailsEvidence => !theory,
        _ => true,
    };
    let agrees = matches!(
        (classification, theory),
        (Classification::Holds, true) | (Classification::FailsEvidence, false)
    );
    CellResult {
        p: e.p(),
        r: e.r(),
        direction: d,
        classification,
        extreme_ratio: extreme,
        extreme_at,
        evidence_family,
        growth,
        residual,
        drift,
        per_size: per_size.iter().map(|x| x.1).collect(),
        theory_holds: Some(theory),
        consistent,
        agrees,
    }
}

fn inadmissible(p: f64, r: f64) -> CellEvidence {
    let row = |direction| CellResult {
        p,
        r,
        direction,
        classification: Classification::Inadmissible,
        extreme_ratio: f64::NAN,
        extreme_at: None,
        evidence_family: None,
        growth: None,
        residual: None,
        drift: None,
        per_size: Vec::new(),
        theory_holds: None,
        consistent: true,
        agrees: false,
    };
    CellEvidence { p, r, ladders: Vec::new(), rows: vec![row(Direction::Forward), row(Direction::Reverse)] }
}

/// Evaluates one cell.
pub fn sweep_cell(p: f64, r: f64, cell: usize, spec: &SampleSpec, seed: u64) -> CellEvidence {
    let Ok(e) = ExponentPair::new(p, r) else { return inadmissible(p, r) };
    let mut hi = Vec::new();
    let mut lo = Vec::new();
    for &n in &spec.sizes {
        let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(seed, cell, n));
        let (mut max, mut min) = (f64::NEG_INFINITY, f64::INFINITY);
        for _ in 0..spec.instances {
            let v = minkowski_ratio(&random_instance(&mut rng, n), e);
            if !v.degenerate && v.ratio.is_finite() {
                max = max.max(v.ratio);
                min = min.min(v.ratio);
            }
        }
        hi.push((n, max));
        lo.push((n, min));
    }
    let ladders = ladders(e, spec);
    let rows = vec![classify(e, Direction::Forward, &hi, &ladders), classify(e, Direction::Reverse, &lo, &ladders)];
    CellEvidence { p, r, ladders, rows }
}

/// Classifies every cell of the grid in both directions. Cells are
/// independent and seeded from `(seed, cell index, size)`, so the result does
/// not depend on the thread count.
pub fn sweep_plane(grid: &PlaneGrid, spec: &SampleSpec, seed: u64) -> RegionMap {
    let cells = grid.cells();
    let evidence = cells.par_iter().enumerate().map(|(k, &(p, r))| sweep_cell(p, r, k, spec, seed)).collect();
    RegionMap { seed, grid: grid.clone(), samples: spec.clone(), cells: evidence }
}

impl RegionMap {
    pub const CSV_HEADER: [&'static str; 12] = [
        "p",
        "r",
        "direction",
        "maxRatio/minRatio",
        "classification",
        "evidenceFamily",
        "N_or_eps_at_extreme",
        "growth",
        "residual",
        "drift",
        "theory",
        "consistent",
    ];

    pub fn rows(&self) -> impl Iterator<Item = &CellResult> {
        self.cells.iter().flat_map(|c| c.rows.iter())
    }

    pub fn csv_records(&self) -> Vec<Vec<String>> {
        let opt = |x: Option<f64>| x.map(csv_f64).unwrap_or_default();
        self.rows()
            .map(|c| {
                vec![
                    csv_f64(c.p),
                    csv_f64(c.r),
                    c.direction.as_str().to_string(),
                    csv_f64(c.extreme_ratio),
                    format!("{}-{}", c.direction.as_str(), c.classification.as_str()),
                    c.evidence_family.map(|f| f.label().to_string()).unwrap_or_default(),
                    opt(c.extreme_at),
                    opt(c.growth),
                    opt(c.residual),
                    opt(c.drift),
                    match c.theory_holds {
                        Some(true) => "holds".into(),
                        Some(false) => "fails".into(),
                        None => String::new(),
                    },
                    c.consistent.to_string(),
                ]
            })
            .collect()
    }

    /// Number of admissible cells (both directions) whose classification matches the theory.
    pub fn agreement(&self) -> (usize, usize) {
        let agreeing = self.cells.iter().filter(|c| c.rows.iter().all(|r| r.agrees)).count();
        let admissible =
            self.cells.iter().filter(|c| c.rows.iter().all(|r| r.classification != Classification::Inadmissible)).count();
        (agreeing, admissible)
    }

    pub fn all_consistent(&self) -> bool {
        self.rows().all(|r| r.consistent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = PlaneGrid::parse("p=0.25:4:0.25,r=0.25:4:0.25").unwrap();
        assert_eq!(g.cells().len(), 256);
        assert_eq!(g, PlaneGrid::default());
        let g = PlaneGrid::parse("p=1,2,inf,r=2").unwrap();
        assert_eq!(g.p, vec![1.0, 2.0, f64::INFINITY]);
        assert_eq!(g.r, vec![2.0]);
        assert!(PlaneGrid::parse("q=1").is_err());
        assert!(PlaneGrid::parse("1,p=2,r=1").is_err());
        assert!(PlaneGrid::parse("p=2").is_err());
    }

    #[test]
    fn inadmissible_cells_are_labelled() {
        let map = sweep_plane(&PlaneGrid::parse("p=inf,r=2").unwrap(), &SampleSpec::default(), 1);
        assert!(map.rows().all(|r| r.classification == Classification::Inadmissible));
    }

    #[test]
    fn theory_regions() {
        let e = |p, r| ExponentPair::new(p, r).unwrap();
        assert!(reverse_theory(e(0.5, 0.5)) && reverse_theory(e(1.0, 1.0)) && !reverse_theory(e(1.0, 0.5)));
        assert!(forward_theory(e(2.0, 1.0)) && !forward_theory(e(1.0, 2.0)));
    }
}
