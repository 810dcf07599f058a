use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    /// Atoms with arbitrary nonnegative weights (counting measure when all are 1).
    DiscreteWithWeights,
    /// An interval cut into cells of equal length.
    IntervalWithUniformGrid,
}

/// A finite measure space given by its atoms. Atom labels are their indices.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpace {
    kind: SpaceKind,
    masses: Vec<f64>,
}

impl MeasureSpace {
    pub fn new(kind: SpaceKind, masses: Vec<f64>) -> Result<Self> {
        if let Some(m) = masses.iter().find(|m| !(m.is_finite() && **m >= 0.0)) {
            return Err(Error::InvalidMeasure(format!("atom mass {m} is not a finite nonnegative number")));
        }
        if !masses.iter().sum::<f64>().is_finite() {
            return Err(Error::InvalidMeasure("total mass overflows".into()));
        }
        Ok(Self { kind, masses })
    }

    pub fn discrete(masses: Vec<f64>) -> Result<Self> {
        Self::new(SpaceKind::DiscreteWithWeights, masses)
    }

    /// `n` atoms of unit mass.
    pub fn counting(n: usize) -> Self {
        Self { kind: SpaceKind::DiscreteWithWeights, masses: vec![1.0; n] }
    }

    /// An interval of the given length cut into `cells` equal cells.
    pub fn interval(length: f64, cells: usize) -> Result<Self> {
        if cells == 0 || !(length.is_finite() && length >= 0.0) {
            return Err(Error::InvalidMeasure(format!("interval of length {length} with {cells} cells")));
        }
        Self::new(SpaceKind::IntervalWithUniformGrid, vec![length / cells as f64; cells])
    }

    pub fn empty() -> Self {
        Self { kind: SpaceKind::DiscreteWithWeights, masses: Vec::new() }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_masses() {
        assert!(MeasureSpace::discrete(vec![1.0, -0.5]).is_err());
        assert!(MeasureSpace::discrete(vec![f64::INFINITY]).is_err());
        assert!(MeasureSpace::discrete(vec![f64::MAX, f64::MAX]).is_err());
        assert!(MeasureSpace::interval(1.0, 0).is_err());
    }

    #[test]
    fn interval_cells() {
        let s = MeasureSpace::interval(2.0, 4).unwrap();
        assert_eq!(s.masses(), &[0.5; 4]);
        assert_eq!(s.total_mass(), 2.0);
        assert_eq!(s.kind(), SpaceKind::IntervalWithUniformGrid);
    }
}
