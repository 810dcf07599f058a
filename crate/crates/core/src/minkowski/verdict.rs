use serde::{Deserialize, Serialize};

use crate::lorentz::{lorentz_norm, ExponentPair, ProductStepFunction};
use crate::report::{ext_f64, ratio_of};

/// Which Minkowski inequality a ratio is read against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `‖∫ F(x,·) dx‖ ≲ ∫ ‖F(x,·)‖ dx`: the ratio stays bounded above.
    Forward,
    /// `∫ ‖F(x,·)‖ dx ≲ ‖∫ F(x,·) dx‖`: the ratio stays bounded below.
    Reverse,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Forward => "forward",
            Self::Reverse => "reverse",
        }
    }
}

/// Both sides of Minkowski's integral inequality for one function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MinkowskiVerdict {
    pub exponents: ExponentPair,
    pub direction: Direction,
    /// `‖y ↦ ∫_X F(x,y) dμ_X(x)‖_{p,r}`.
    #[serde(with = "ext_f64")]
    pub lhs: f64,
    /// `∫_X ‖F(x,·)‖_{p,r} dμ_X(x)`.
    #[serde(with = "ext_f64")]
    pub rhs: f64,
    /// `lhs / rhs`, `0/0 = 1` (then `degenerate` is set).
    #[serde(with = "ext_f64")]
    pub ratio: f64,
    pub degenerate: bool,
    pub descriptor: String,
    /// Ladder coordinate (`N` or `ε = p − α`) for family evaluations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter: Option<f64>,
    /// Largest relative change of the ratio under grid refinement, when measured.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discretization: Option<serde_json::Value>,
}

impl MinkowskiVerdict {
    pub fn new(exponents: ExponentPair, lhs: f64, rhs: f64, descriptor: impl Into<String>) -> Self {
        let (ratio, degenerate) = ratio_of(lhs, rhs);
        Self {
            exponents,
            direction: Direction::Forward,
            lhs,
            rhs,
            ratio,
            degenerate,
            descriptor: descriptor.into(),
            parameter: None,
            refinement_delta: None,
            discretization: None,
        }
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }
}

/// Evaluates both sides exactly on a product grid.
pub fn minkowski_ratio(f: &ProductStepFunction, e: ExponentPair) -> MinkowskiVerdict {
    let lhs = lorentz_norm(&f.x_integral(), e);
    let rhs: f64 = f.x_space().masses().iter().enumerate().map(|(i, m)| m * lorentz_norm(&f.slice(i), e)).sum();
    MinkowskiVerdict::new(e, lhs, rhs, format!("grid {}x{}", f.x_len(), f.y_len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::MeasureSpace;

    #[test]
    fn tensor_and_single_atom() {
        let x = MeasureSpace::discrete(vec![0.5, 2.0, 1.0]).unwrap();
        let y = MeasureSpace::discrete(vec![1.0, 0.25]).unwrap();
        let f = ProductStepFunction::tensor(x, &[1.0, 3.0, 0.5], y.clone(), &[2.0, 7.0]).unwrap();
        let v = minkowski_ratio(&f, ExponentPair::new(0.7, 3.0).unwrap());
        assert!((v.ratio - 1.0).abs() < 1e-14);
        let single = ProductStepFunction::new(MeasureSpace::discrete(vec![3.0]).unwrap(), y, vec![1.0, 4.0]).unwrap();
        let v = minkowski_ratio(&single, ExponentPair::new(2.0, 0.5).unwrap());
        assert!((v.ratio - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_is_degenerate() {
        let f = ProductStepFunction::new(MeasureSpace::counting(2), MeasureSpace::counting(2), vec![0.0; 4]).unwrap();
        let v = minkowski_ratio(&f, ExponentPair::new(2.0, 2.0).unwrap());
        assert!(v.degenerate);
        assert_eq!(v.ratio, 1.0);
    }
}
