use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Abscissa used by [`rate_fit`]; the ordinate is always `ln(ratio)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RateModel {
    /// `ln ln N`.
    PowerOfLogN,
    /// `ln N`.
    PowerOfN,
    /// `ln ε`.
    PowerOfEps,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RateFit {
    pub model: RateModel,
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual of the least-squares line.
    pub max_residual: f64,
    /// Trend of the ratios in the order the points were given.
    pub trend: Trend,
    pub points: usize,
}

impl RateFit {
    pub fn is_monotone(&self) -> bool {
        self.trend != Trend::Mixed
    }
}

/// Least-squares fit of `ln(ratio)` against the model abscissa.
///
/// For `N` models the parameters must be strictly increasing and `> 1`; for
/// `ε` they must be positive and distinct.
pub fn rate_fit(series: &[(f64, f64)], model: RateModel) -> Result<RateFit> {
    if series.len() < 4 {
        return Err(Error::InvalidParameter(format!("rate fit needs at least 4 points, got {}", series.len())));
    }
    let mut xs = Vec::with_capacity(series.len());
    let mut ys = Vec::with_capacity(series.len());
    for (i, &(t, ratio)) in series.iter().enumerate() {
        if !(ratio > 0.0 && ratio.is_finite()) {
            return Err(Error::InvalidParameter(format!("ratio {ratio} cannot be fitted on a log scale")));
        }
        let x = match model {
            RateModel::PowerOfLogN | RateModel::PowerOfN => {
                if !(t > 1.0) || (i > 0 && !(t > series[i - 1].0)) {
                    return Err(Error::InvalidParameter("N must be strictly increasing and > 1".into()));
                }
                if model == RateModel::PowerOfN {
                    t.ln()
                } else {
                    t.ln().ln()
                }
            }
            RateModel::PowerOfEps => {
                if !(t > 0.0) {
                    return Err(Error::InvalidParameter(format!("ε = {t} must be positive")));
                }
                t.ln()
            }
        };
        xs.push(x);
        ys.push(ratio.ln());
    }
    let mut sorted = xs.clone();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter("fit abscissae must be distinct".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).abs()).fold(0.0, f64::max);
    let ratios: Vec<f64> = series.iter().map(|p| p.1).collect();
    Ok(RateFit { model, slope, intercept, max_residual, trend: trend(&ratios), points: series.len() })
}

pub fn trend(values: &[f64]) -> Trend {
    let up = values.windows(2).all(|w| w[1] > w[0]);
    let down = values.windows(2).all(|w| w[1] < w[0]);
    let flat = values.windows(2).all(|w| w[1] == w[0]);
    match (up, down, flat) {
        (_, _, true) => Trend::Constant,
        (true, _, _) => Trend::Increasing,
        (_, true, _) => Trend::Decreasing,
        _ => Trend::Mixed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let s: Vec<(f64, f64)> = [2.0, 4.0, 8.0, 16.0].iter().map(|&n: &f64| (n, n.powf(1.0))).collect();
        let f = rate_fit(&s, RateModel::PowerOfN).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12 && f.max_residual < 1e-12);
        assert_eq!(f.trend, Trend::Increasing);
        let e: Vec<(f64, f64)> = [0.2, 0.1, 0.05, 0.025].iter().map(|&x: &f64| (x, 3.0 * x.sqrt())).collect();
        assert!((rate_fit(&e, RateModel::PowerOfEps).unwrap().slope - 0.5).abs() < 1e-12);
        let c: Vec<(f64, f64)> = [10.0, 20.0, 40.0, 80.0].iter().map(|&n| (n, 2.0)).collect();
        let f = rate_fit(&c, RateModel::PowerOfLogN).unwrap();
        assert_eq!(f.slope, 0.0);
        assert_eq!(f.trend, Trend::Constant);
    }

    #[test]
    fn rejects_bad_series() {
        assert!(rate_fit(&[(2.0, 1.0), (4.0, 1.0), (8.0, 1.0)], RateModel::PowerOfN).is_err());
        assert!(rate_fit(&[(2.0, 1.0), (4.0, 1.0), (3.0, 1.0), (8.0, 1.0)], RateModel::PowerOfN).is_err());
        assert!(rate_fit(&[(2.0, 1.0), (4.0, 0.0), (6.0, 1.0), (8.0, 1.0)], RateModel::PowerOfN).is_err());
        let mixed = rate_fit(&[(2.0, 1.0), (4.0, 2.0), (6.0, 1.5), (8.0, 3.0)], RateModel::PowerOfN).unwrap();
        assert!(!mixed.is_monotone());
    }
}
