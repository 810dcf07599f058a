//! Measure spaces, step functions and exact Lorentz quasi-norms.

mod exponent;
pub(crate) use exponent::fmt_exp;
mod json;
mod norm;
mod product;
mod space;
mod step;

pub use exponent::{ExponentPair, MixedExponents};
pub use norm::{
    distribution, lebesgue_norm, lebesgue_of_pairs, lorentz_norm, lorentz_norm_of_pairs, mixed_lorentz_norm, quasi_triangle_constant,
    LorentzAccumulator,
};
pub use product::ProductStepFunction;
pub use space::{MeasureSpace, SpaceKind};
pub use step::{rearrangement, Level, StepFunction};
