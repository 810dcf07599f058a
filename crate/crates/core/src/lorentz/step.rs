use super::space::{MeasureSpace, SpaceKind};
use crate::{Error, Result};

/// One level of a step function: `value` is taken on a set of measure `mass`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level {
    pub value: f64,
    pub mass: f64,
}

impl Level {
    pub fn new(value: f64, mass: f64) -> Self {
        Self { value, mass }
    }
}

/// A nonnegative simple function on a finite measure space, stored as levels.
///
/// Levels need not be sorted or distinct; [`StepFunction::canonical`] gives the
/// strictly decreasing form with zero levels dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    space: MeasureSpace,
    levels: Vec<Level>,
}

impl StepFunction {
    pub fn new(space: MeasureSpace, levels: Vec<Level>) -> Result<Self> {
        for l in &levels {
            if !(l.value.is_finite() && l.value >= 0.0) {
                return Err(Error::InvalidFunction(format!("level value {} must be finite and ≥ 0", l.value)));
            }
            if !(l.mass.is_finite() && l.mass > 0.0) {
                return Err(Error::InvalidFunction(format!("level mass {} must be finite and > 0", l.mass)));
            }
        }
        let used: f64 = levels.iter().map(|l| l.mass).sum();
        let total = space.total_mass();
        if used > total * (1.0 + 1e-12) + f64::MIN_POSITIVE {
            return Err(Error::InvalidFunction(format!("levels carry mass {used} but the space only has {total}")));
        }
        Ok(Self { space, levels })
    }

    /// Builds `|f|` from one value per atom of `space`; atoms of zero mass are skipped.
    pub fn from_atoms(space: MeasureSpace, values: &[f64]) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::InvalidFunction(format!(
                "{} values for a space with {} atoms",
                values.len(),
                space.len()
            )));
        }
        let levels = values
            .iter()
            .zip(space.masses())
            .filter(|(_, m)| **m > 0.0)
            .map(|(v, m)| Level::new(v.abs(), *m))
            .collect();
        Self::new(space, levels)
    }

    /// A function on a discrete space whose atoms are exactly the given `(value, mass)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let space = MeasureSpace::discrete(pairs.iter().map(|p| p.1).collect())?;
        Self::new(space, pairs.iter().map(|&(v, m)| Level::new(v, m)).collect())
    }

    /// Indicator of a set of the given measure.
    pub fn indicator(mass: f64) -> Result<Self> {
        Self::from_pairs(&[(1.0, mass)])
    }

    pub fn zero(space: MeasureSpace) -> Self {
        Self { space, levels: Vec::new() }
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(|l| l.value == 0.0)
    }

    pub fn max_value(&self) -> f64 {
        self.levels.iter().map(|l| l.value).fold(0.0, f64::max)
    }

    /// Mass of the support.
    pub fn support_mass(&self) -> f64 {
        self.levels.iter().filter(|l| l.value > 0.0).map(|l| l.mass).sum()
    }

    /// Strictly decreasing positive values with merged masses.
    pub fn canonical(&self) -> Vec<Level> {
        let mut sorted: Vec<Level> = self.levels.iter().copied().filter(|l| l.value > 0.0).collect();
        sorted.sort_by(|a, b| b.value.total_cmp(&a.value));
        let mut out: Vec<Level> = Vec::with_capacity(sorted.len());
        for l in sorted {
            match out.last_mut() {
                Some(last) if last.value == l.value => last.mass += l.mass,
                _ => out.push(l),
            }
        }
        out
    }

    /// `λ·f` for `λ ≥ 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        let levels = self.levels.iter().map(|l| Level::new(l.value * lambda, l.mass)).collect();
        Self::new(self.space.clone(), levels)
    }
}

/// Decreasing rearrangement: the step function on `(0, μ(X))` with the same
/// distribution function, values strictly decreasing. Labels are dropped.
pub fn rearrangement(f: &StepFunction) -> StepFunction {
    let levels = f.canonical();
    let mut cells: Vec<f64> = levels.iter().map(|l| l.mass).collect();
    let rest = f.space().total_mass() - cells.iter().sum::<f64>();
    if rest > 0.0 {
        cells.push(rest);
    }
    let space = MeasureSpace::new(SpaceKind::IntervalWithUniformGrid, cells)
        .expect("masses come from a valid step function");
    StepFunction { space, levels }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rearrangement_sorts() {
        let f = StepFunction::from_pairs(&[(1.0, 1.0), (2.0, 1.0)]).unwrap();
        assert_eq!(rearrangement(&f).levels(), &[Level::new(2.0, 1.0), Level::new(1.0, 1.0)]);
    }

    #[test]
    fn rearrangement_merges_ties() {
        let f = StepFunction::from_pairs(&[(3.0, 0.5), (3.0, 0.5)]).unwrap();
        assert_eq!(rearrangement(&f).levels(), &[Level::new(3.0, 1.0)]);
    }

    #[test]
    fn rearrangement_of_zero_is_empty() {
        let f = StepFunction::zero(MeasureSpace::counting(3));
        let g = rearrangement(&f);
        assert!(g.levels().is_empty());
        assert_eq!(g.space().total_mass(), 3.0);
        let h = StepFunction::from_atoms(MeasureSpace::counting(2), &[0.0, 0.0]).unwrap();
        assert!(rearrangement(&h).levels().is_empty());
    }

    #[test]
    fn level_mass_cannot_exceed_space() {
        let space = MeasureSpace::discrete(vec![1.0]).unwrap();
        assert!(StepFunction::new(space, vec![Level::new(1.0, 2.0)]).is_err());
    }

    #[test]
    fn rejects_negative_and_nan_levels() {
        assert!(StepFunction::from_pairs(&[(-1.0, 1.0)]).is_err());
        assert!(StepFunction::from_pairs(&[(f64::NAN, 1.0)]).is_err());
        assert!(StepFunction::from_pairs(&[(1.0, 0.0)]).is_err());
    }

    #[test]
    fn from_atoms_takes_modulus() {
        let f = StepFunction::from_atoms(MeasureSpace::counting(2), &[-2.0, 1.0]).unwrap();
        assert_eq!(f.max_value(), 2.0);
    }
}
