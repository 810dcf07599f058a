use super::space::MeasureSpace;
use super::step::{Level, StepFunction};
use crate::{Error, Result};

/// A nonnegative step function on `X × Y`, one value per pair of atoms.
///
/// `values` is row-major: entry `i * y.len() + j` belongs to `(x_i, y_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductStepFunction {
    x: MeasureSpace,
    y: MeasureSpace,
    values: Vec<f64>,
}

impl ProductStepFunction {
    pub fn new(x: MeasureSpace, y: MeasureSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != x.len() * y.len() {
            return Err(Error::InvalidFunction(format!(
                "grid has {} entries, expected {}×{}",
                values.len(),
                x.len(),
                y.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidFunction(format!("grid entry {v} must be finite and ≥ 0")));
        }
        Ok(Self { x, y, values })
    }

    /// `(x, y) ↦ g(x)·h(y)`.
    pub fn tensor(x: MeasureSpace, g: &[f64], y: MeasureSpace, h: &[f64]) -> Result<Self> {
        if g.len() != x.len() || h.len() != y.len() {
            return Err(Error::InvalidFunction("tensor factor lengths do not match the spaces".into()));
        }
        let values = g.iter().flat_map(|a| h.iter().map(move |b| (a * b).abs())).collect();
        Self::new(x, y, values)
    }

    /// Builds the grid from a closure of the atom indices.
    pub fn from_fn(x: MeasureSpace, y: MeasureSpace, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let (nx, ny) = (x.len(), y.len());
        let mut values = Vec::with_capacity(nx * ny);
        for i in 0..nx {
            for j in 0..ny {
                values.push(f(i, j));
            }
        }
        Self::new(x, y, values)
    }

    pub fn x_space(&self) -> &MeasureSpace {
        &self.x
    }

    pub fn y_space(&self) -> &MeasureSpace {
        &self.y
    }

    pub fn x_len(&self) -> usize {
        self.x.len()
    }

    pub fn y_len(&self) -> usize {
        self.y.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.y.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let ny = self.y.len();
        &self.values[i * ny..(i + 1) * ny]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }

    /// The slice `y ↦ F(x_i, y)`.
    pub fn slice(&self, i: usize) -> StepFunction {
        StepFunction::from_atoms(self.y.clone(), self.row(i)).expect("rows are valid by construction")
    }

    /// `y ↦ ∫_X F(x, y) dμ_X(x)`.
    pub fn x_integral(&self) -> StepFunction {
        let ny = self.y.len();
        let mut acc = vec![0.0; ny];
        for (i, mx) in self.x.masses().iter().enumerate() {
            for (a, v) in acc.iter_mut().zip(self.row(i)) {
                *a += mx * v;
            }
        }
        StepFunction::from_atoms(self.y.clone(), &acc).expect("finite nonnegative sums")
    }

    /// `F` as a single step function on the product measure `μ_X ⊗ μ_Y`.
    pub fn flatten(&self) -> StepFunction {
        let mut masses = Vec::with_capacity(self.values.len());
        for mx in self.x.masses() {
            for my in self.y.masses() {
                masses.push(mx * my);
            }
        }
        let levels = self
            .values
            .iter()
            .zip(&masses)
            .filter(|(_, m)| **m > 0.0)
            .map(|(v, m)| Level::new(*v, *m))
            .collect();
        let space = MeasureSpace::discrete(masses).expect("products of finite masses");
        StepFunction::new(space, levels).expect("valid product levels")
    }

    /// `λ·F` for `λ ≥ 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.x.clone(), self.y.clone(), self.values.iter().map(|v| v * lambda).collect())
    }

    /// Reorders the atoms of both axes; `px[k]` is the old index of the new `k`-th x-atom.
    pub fn permuted(&self, px: &[usize], py: &[usize]) -> Result<Self> {
        if px.len() != self.x.len() || py.len() != self.y.len() {
            return Err(Error::InvalidParameter("permutation lengths do not match".into()));
        }
        let x = MeasureSpace::new(self.x.kind(), px.iter().map(|&i| self.x.masses()[i]).collect())?;
        let y = MeasureSpace::new(self.y.kind(), py.iter().map(|&j| self.y.masses()[j]).collect())?;
        Self::from_fn(x, y, |i, j| self.value(px[i], py[j]))
    }

    /// Swaps the roles of `X` and `Y`.
    pub fn transposed(&self) -> Self {
        Self::from_fn(self.y.clone(), self.x.clone(), |j, i| self.value(i, j)).expect("same entries")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_is_checked() {
        let x = MeasureSpace::counting(2);
        let y = MeasureSpace::counting(3);
        assert!(ProductStepFunction::new(x.clone(), y.clone(), vec![0.0; 5]).is_err());
        assert!(ProductStepFunction::new(x.clone(), y.clone(), vec![-1.0; 6]).is_err());
        assert!(ProductStepFunction::new(x, y, vec![0.0; 6]).is_ok());
    }

    #[test]
    fn slices_and_integral() {
        let x = MeasureSpace::discrete(vec![1.0, 2.0]).unwrap();
        let y = MeasureSpace::counting(2);
        let f = ProductStepFunction::new(x, y, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(f.slice(1).levels()[1].value, 4.0);
        let t = f.x_integral();
        assert_eq!(t.levels()[0].value, 7.0);
        assert_eq!(t.levels()[1].value, 10.0);
        let flat = f.flatten();
        assert_eq!(flat.space().total_mass(), 6.0);
        assert_eq!(f.transposed().value(1, 0), 2.0);
    }

    #[test]
    fn permutation_moves_masses_with_values() {
        let x = MeasureSpace::discrete(vec![1.0, 2.0]).unwrap();
        let y = MeasureSpace::discrete(vec![3.0, 5.0]).unwrap();
        let f = ProductStepFunction::new(x, y, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let g = f.permuted(&[1, 0], &[1, 0]).unwrap();
        assert_eq!(g.value(0, 0), 4.0);
        assert_eq!(g.x_space().masses(), &[2.0, 1.0]);
        assert_eq!(g.y_space().masses(), &[5.0, 3.0]);
    }
}
