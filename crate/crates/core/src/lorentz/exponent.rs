use std::fmt;

use serde::{Deserialize, Serialize};

use crate::report::ext_f64;
use crate::{Error, Result};

/// Exponents `(p, r)` of a Lorentz space `L^{p,r}`.
///
/// Admissible pairs are `0 < p < ∞, 0 < r ≤ ∞` together with `p = r = ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    #[serde(with = "ext_f64")]
    p: f64,
    #[serde(with = "ext_f64")]
    r: f64,
}

impl ExponentPair {
    pub fn new(p: f64, r: f64) -> Result<Self> {
        let positive = |x: f64| x > 0.0 && !x.is_nan();
        if !positive(p) || !positive(r) || (p.is_infinite() && r.is_finite()) {
            return Err(Error::InadmissibleExponents { p, r });
        }
        Ok(Self { p, r })
    }

    /// The pair `(p, p)`.
    pub fn diagonal(p: f64) -> Result<Self> {
        Self::new(p, p)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// `1 < p < ∞, 1 ≤ r ≤ ∞`, or `p = r = 1`, or `p = r = ∞`.
    pub fn is_normable(&self) -> bool {
        let (p, r) = (self.p, self.r);
        (p > 1.0 && p.is_finite() && r >= 1.0)
            || (p == 1.0 && r == 1.0)
            || (p.is_infinite() && r.is_infinite())
    }

    /// Constant `C` with `‖f+g‖ ≤ C(‖f‖ + ‖g‖)`, from
    /// `μ_{f+g}(ρ) ≤ μ_f(ρ/2) + μ_g(ρ/2)`.
    pub fn quasi_triangle_constant(&self) -> f64 {
        let lift = |t: f64| if t.is_infinite() { 1.0 } else { 2f64.powf(1.0 / t - 1.0).max(1.0) };
        2.0 * lift(self.p) * lift(self.r)
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L^{{{},{}}}", fmt_exp(self.p), fmt_exp(self.r))
    }
}

pub(crate) fn fmt_exp(x: f64) -> String {
    if x.is_infinite() {
        "∞".to_string()
    } else {
        format!("{x}")
    }
}

/// Exponents of a mixed Lorentz space `L^{p¹,r¹}(X; L^{p²,r²}(Y))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedExponents {
    /// `(p¹, r¹)`, acting on `X`.
    pub outer: ExponentPair,
    /// `(p², r²)`, acting on the `Y`-slices.
    pub inner: ExponentPair,
}

impl MixedExponents {
    pub fn new(outer: ExponentPair, inner: ExponentPair) -> Self {
        Self { outer, inner }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility() {
        assert!(ExponentPair::new(2.0, f64::INFINITY).is_ok());
        assert!(ExponentPair::new(f64::INFINITY, f64::INFINITY).is_ok());
        assert!(ExponentPair::new(f64::INFINITY, 2.0).is_err());
        assert!(ExponentPair::new(0.0, 1.0).is_err());
        assert!(ExponentPair::new(1.0, -1.0).is_err());
        assert!(ExponentPair::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn normability_table() {
        let n = |p, r| ExponentPair::new(p, r).unwrap().is_normable();
        assert!(n(2.0, 1.0));
        assert!(!n(1.0, 2.0));
        assert!(n(f64::INFINITY, f64::INFINITY));
        assert!(n(1.0, 1.0));
        assert!(n(1.5, f64::INFINITY));
        assert!(!n(0.5, 0.5));
        assert!(!n(3.0, 0.5));
        assert!(!n(1.0, f64::INFINITY));
    }

    #[test]
    fn triangle_constant() {
        let c = |p, r| ExponentPair::new(p, r).unwrap().quasi_triangle_constant();
        assert_eq!(c(2.0, 2.0), 2.0);
        assert_eq!(c(0.5, 0.5), 8.0);
        assert_eq!(c(2.0, 1.0), 2.0);
        assert_eq!(c(f64::INFINITY, f64::INFINITY), 2.0);
    }
}
