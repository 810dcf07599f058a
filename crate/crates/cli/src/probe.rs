use lorentz_lab::embeddings::bounds::{corollary12_params, theorem11_params};
use lorentz_lab::embeddings::{
    cwikel_probe, identity_instance, identity_probe, lemma61_ratio, log_convexity_probe, IdentityKind,
    IdentityParams, ProbeConfig, Regime,
};
use lorentz_lab::interp::InterpParams;
use lorentz_lab::kfunc::LatticeCouple;
use lorentz_lab::lorentz::{ExponentPair, ProductStepFunction};
use lorentz_lab::minkowski::{
    family_eval, family_eval_refined, rate_fit, Discretization, Family, FamilyParams, MinkowskiVerdict, RateModel,
};
use lorentz_lab::report::{csv_f64, fmt_sig, ProbeReport};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{with_ext, write_csv, write_json, Sink};
use crate::settings::Settings;
use crate::Fail;

/// A check whose outcome decides the exit code.
struct Assertion {
    name: String,
    pass: bool,
    detail: String,
}

impl Assertion {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, detail: detail.into() }
    }

    fn to_json(&self) -> Value {
        json!({ "name": self.name, "pass": self.pass, "detail": self.detail })
    }
}

struct Outputs {
    json: Sink,
    csv: Sink,
}

pub fn run(s: &Settings) -> Result<bool, Fail> {
    let name: String = s.require("name")?;
    let stem = s.raw("out").map(String::from).unwrap_or_else(|| format!("probe-{name}"));
    let out = Outputs { json: Sink::create(with_ext(&stem, "json"))?, csv: Sink::create(with_ext(&stem, "csv"))? };
    if name == "family" {
        return family(s, out);
    }
    let cfg = probe_config(s)?;
    let reports = match name.as_str() {
        "cwikel" => cwikel(s, &cfg)?,
        "lemma61" => lemma61(s)?,
        "chen-sun" => chen_sun(s)?,
        "corollary12" => identity(s, IdentityKind::Corollary12, &cfg)?,
        "theorem11" => identity(s, IdentityKind::Theorem11, &cfg)?,
        other => return Err(Fail::Usage(format!("unknown probe `{other}`"))),
    };
    let mut checks = vec![Assertion::new(
        "finite ratios",
        reports.iter().all(|r| r.ratio.is_finite() && r.ratio > 0.0),
        format!("{} reports", reports.len()),
    )];
    if name == "lemma61" {
        let (p, r): (f64, f64) = (s.require("p")?, s.require("r")?);
        if p == r {
            let worst = reports.iter().map(|x| (x.ratio - 1.0).abs()).fold(0.0, f64::max);
            checks.push(Assertion::new("equality at r = p", worst <= 1e-12, format!("worst |ratio - 1| = {}", fmt_sig(worst, 3))));
        }
    }

    for r in &reports {
        println!(
            "{} n={} draw={} ratio={} ({}){}",
            r.probe,
            r.instance.x_size,
            r.instance.draw.map_or(String::new(), |d| d.to_string()),
            fmt_sig(r.ratio, 12),
            r.claim,
            if r.flags.is_empty() { String::new() } else { format!(" [{}]", r.flags.join(",")) }
        );
    }
    if let Some(note) = reports.first().and_then(|r| r.discretization.get("note")).and_then(Value::as_str) {
        println!("note: {note}");
    }
    finish(s, out, &name, &ProbeReport::CSV_HEADER, reports.iter().map(ProbeReport::csv_record).collect(), json!(reports), checks)
}

fn finish(
    s: &Settings,
    out: Outputs,
    name: &str,
    header: &[&str],
    rows: Vec<Vec<String>>,
    results: Value,
    checks: Vec<Assertion>,
) -> Result<bool, Fail> {
    let command = format!("probe {name}");
    let config = s.echo();
    for c in &checks {
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    println!("wrote {} and {}", out.json.path().display(), out.csv.path().display());
    write_csv(out.csv, &command, &config, header, &rows)?;
    let mut body = serde_json::Map::new();
    body.insert("assertions".into(), Value::Array(checks.iter().map(Assertion::to_json).collect()));
    body.insert("results".into(), results);
    write_json(out.json, &command, &config, body)?;
    Ok(checks.iter().all(|c| c.pass))
}

fn probe_config(s: &Settings) -> Result<ProbeConfig, Fail> {
    let mut cfg = ProbeConfig::default();
    cfg.grid.count = s.get_or("samples", cfg.grid.count)?;
    if cfg.grid.count < 2 {
        return Err(Fail::Usage("--samples must be at least 2".into()));
    }
    cfg.k.allow_heuristic = !s.flag("strict-brute")?;
    Ok(cfg)
}

struct Draws {
    sizes: Vec<usize>,
    draws: usize,
    seed: u64,
}

impl Draws {
    fn from(s: &Settings) -> Result<Self, Fail> {
        let sizes = s.list("sizes")?.unwrap_or_else(|| vec![2, 4]);
        if sizes.contains(&0) {
            return Err(Fail::Usage("--sizes must be positive".into()));
        }
        Ok(Self { sizes, draws: s.get_or("draws", 4)?, seed: s.get_or("seed", 0)? })
    }

    /// Runs `probe` on every `(size, draw)` instance; results keep that order.
    fn run<F>(&self, probe: F) -> Result<Vec<ProbeReport>, Fail>
    where
        F: Fn(&ProductStepFunction) -> lorentz_lab::Result<ProbeReport> + Sync,
    {
        let jobs: Vec<(usize, usize)> =
            self.sizes.iter().flat_map(|&n| (0..self.draws).map(move |d| (n, d))).collect();
        let reports: lorentz_lab::Result<Vec<ProbeReport>> = jobs
            .par_iter()
            .map(|&(n, d)| {
                let mut rep = probe(&identity_instance(self.seed, n, d))?;
                rep.instance.seed = Some(self.seed);
                rep.instance.draw = Some(d);
                Ok(rep)
            })
            .collect();
        Ok(reports?)
    }
}

fn cwikel(s: &Settings, cfg: &ProbeConfig) -> Result<Vec<ProbeReport>, Fail> {
    let (p, r, q): (f64, f64, f64) = (s.require("p")?, s.require("r")?, s.require("q")?);
    let regime: Regime = s.get_or("regime", Regime::I)?;
    if !regime.holds_for(p, q, r) {
        return Err(Fail::Hypothesis(format!(
            "(p, q, r) = ({p}, {q}, {r}) is outside regime ({regime}): {}",
            regime.condition()
        )));
    }
    let e = ExponentPair::new(p, r)?;
    let ip = InterpParams::new(s.get_or("theta", 0.5)?, q)?;
    let inner = match s.raw("inner").unwrap_or("l1-linf") {
        "l1-linf" => LatticeCouple::l1_linf(),
        "linf-l1" => LatticeCouple::l1_linf().swapped(),
        other => return Err(Fail::Usage(format!("--inner: unknown couple `{other}` (l1-linf or linf-l1)"))),
    };
    Draws::from(s)?.run(|f| cwikel_probe(f, e, ip, &inner, regime, cfg))
}

fn lemma61(s: &Settings) -> Result<Vec<ProbeReport>, Fail> {
    let e = ExponentPair::new(s.require("p")?, s.require("r")?)?;
    Draws::from(s)?.run(|f| Ok(lemma61_ratio(f, e)))
}

fn chen_sun(s: &Settings) -> Result<Vec<ProbeReport>, Fail> {
    let need = |k: &str| s.pair(k)?.ok_or_else(|| Fail::Usage(format!("--{k} is required")));
    let (p0, p1) = (need("p0")?, need("p1")?);
    let theta: f64 = s.require("theta")?;
    Draws::from(s)?.run(|f| log_convexity_probe(f, p0, p1, theta))
}

fn identity(s: &Settings, kind: IdentityKind, cfg: &ProbeConfig) -> Result<Vec<ProbeReport>, Fail> {
    let params = match kind {
        IdentityKind::Corollary12 => {
            let d = corollary12_params();
            IdentityParams::corollary(
                s.get_or("p0", d.p0[0])?,
                s.get_or("p1", d.p1[0])?,
                s.get_or("r", d.r0[0])?,
                s.get_or("q", d.q)?,
                s.get_or("theta", d.theta)?,
            )
        }
        IdentityKind::Theorem11 => {
            let d = theorem11_params();
            IdentityParams {
                p0: s.pair("p0")?.unwrap_or(d.p0),
                r0: s.pair("r0")?.unwrap_or(d.r0),
                p1: s.pair("p1")?.unwrap_or(d.p1),
                r1: s.pair("r1")?.unwrap_or(d.r1),
                theta0: s.get_or("theta0", d.theta0)?,
                theta1: s.get_or("theta1", d.theta1)?,
                theta: s.get_or("theta", d.theta)?,
                q: s.get_or("q", d.q)?,
            }
        }
    };
    params.validate(kind)?;
    let d = Draws::from(s)?;
    Ok(identity_probe(kind, &params, &d.sizes, d.draws, d.seed, cfg)?)
}

fn family(s: &Settings, out: Outputs) -> Result<bool, Fail> {
    let fam: Family = s.raw("family").ok_or_else(|| Fail::Usage("--family is required".into()))?.parse()?;
    let (p, r): (f64, f64) = (s.require("p")?, s.require("r")?);
    let e = ExponentPair::new(p, r)?;
    let disc = Discretization {
        l_factor: s.get_or("l-factor", Discretization::default().l_factor)?,
        cells_per_unit: s.get_or("cells-per-unit", Discretization::default().cells_per_unit)?,
    };
    let pow2 = |ks: &mut dyn Iterator<Item = u32>| ks.map(|k| 1u64 << k).collect::<Vec<_>>();
    let (members, model): (Vec<FamilyParams>, RateModel) = match fam {
        Family::F41 => {
            let gaps = s.list("alpha-ladder")?.unwrap_or_else(|| vec![0.2, 0.1, 0.05, 0.025]);
            (gaps.iter().map(|g| FamilyParams::F41 { alpha: p - g }).collect(), RateModel::PowerOfEps)
        }
        Family::F42 => {
            let ns = s.list("n-ladder")?.unwrap_or_else(|| vec![2, 4, 8, 16]);
            (ns.into_iter().map(|n| FamilyParams::F42 { n }).collect(), RateModel::PowerOfN)
        }
        Family::F43 => {
            let ns = s.list("n-ladder")?.unwrap_or_else(|| pow2(&mut (6..=12)));
            let beta = s.get_or("beta", 0.75)?;
            (ns.into_iter().map(|n| FamilyParams::F43 { n, beta, disc }).collect(), RateModel::PowerOfLogN)
        }
        Family::F44 => {
            let ns = s.list("n-ladder")?.unwrap_or_else(|| pow2(&mut (10..=18).step_by(2)));
            let beta = s.get_or("beta", 2.05)?;
            (ns.into_iter().map(|n| FamilyParams::F44 { n, beta, disc }).collect(), RateModel::PowerOfLogN)
        }
    };
    let refine = s.flag("refine")?;
    let verdicts: Vec<MinkowskiVerdict> = members
        .par_iter()
        .map(|&m| if refine { family_eval_refined(m, e) } else { family_eval(m, e) })
        .collect::<lorentz_lab::Result<_>>()?;
    let points: Vec<(f64, f64)> = verdicts.iter().map(|v| (v.parameter.unwrap_or(f64::NAN), v.ratio)).collect();
    let fit = if points.len() >= 4 { Some(rate_fit(&points, model)?) } else { None };

    let ratios: Vec<f64> = verdicts.iter().map(|v| v.ratio).collect();
    let mut checks = Vec::new();
    match fam {
        Family::F41 => {
            if let Some(f) = &fit {
                let target = 1.0 - 1.0 / r;
                checks.push(Assertion::new(
                    "slope 1 - 1/r",
                    (f.slope - target).abs() <= 0.02,
                    format!("slope {} vs {}", fmt_sig(f.slope, 6), fmt_sig(target, 6)),
                ));
            }
        }
        Family::F42 => {
            let worst = points
                .iter()
                .map(|&(n, ratio)| {
                    let exact = n.powf(1.0 / p - 1.0);
                    ((ratio - exact) / exact).abs()
                })
                .fold(0.0, f64::max);
            checks.push(Assertion::new("ratio N^(1/p - 1)", worst <= 1e-12, format!("worst deviation {}", fmt_sig(worst, 3))));
        }
        Family::F43 => {
            let up = ratios.windows(2).all(|w| w[1] > w[0]);
            checks.push(Assertion::new("increasing in N", up, ratio_list(&ratios)));
        }
        Family::F44 => {
            let down = ratios.windows(2).all(|w| w[1] < w[0]);
            checks.push(Assertion::new("decreasing in N", down, ratio_list(&ratios)));
        }
    }
    if refine && matches!(fam, Family::F43 | Family::F44) {
        let worst = verdicts.iter().filter_map(|v| v.refinement_delta).fold(0.0, f64::max);
        checks.push(Assertion::new("refinement delta below 1%", worst < 0.01, format!("{}%", fmt_sig(100.0 * worst, 3))));
    }

    for v in &verdicts {
        println!("{}: ratio {}", v.descriptor, fmt_sig(v.ratio, 12));
    }
    if let Some(f) = &fit {
        println!("fitted slope {} ({:?}, {} points, max residual {})", fmt_sig(f.slope, 6), f.model, f.points, fmt_sig(f.max_residual, 3));
    }
    let header = ["family", "p", "r", "parameter", "lhs", "rhs", "ratio", "refinementDelta", "descriptor"];
    let rows = verdicts
        .iter()
        .map(|v| {
            vec![
                fam.label().to_string(),
                csv_f64(p),
                csv_f64(r),
                v.parameter.map(csv_f64).unwrap_or_default(),
                csv_f64(v.lhs),
                csv_f64(v.rhs),
                csv_f64(v.ratio),
                v.refinement_delta.map(csv_f64).unwrap_or_default(),
                v.descriptor.clone(),
            ]
        })
        .collect();
    let results = json!({ "family": fam.label(), "fit": fit, "verdicts": verdicts });
    finish(s, out, "family", &header, rows, results, checks)
}

fn ratio_list(ratios: &[f64]) -> String {
    ratios.iter().map(|x| fmt_sig(*x, 6)).collect::<Vec<_>>().join(", ")
}
