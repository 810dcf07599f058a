use super::{k_exact_l1_linf, k_lattice_with, KOptions, LatticeCouple, LatticeFunction};
use crate::lorentz::{lorentz_norm, ExponentPair, ProductStepFunction, StepFunction};
use crate::Result;

/// Both sides of `K(s, F; L^{p,r}(X;A₀), L^{p,r}(X;A₁)) ≃ ‖x ↦ K(s, F(x,·); A₀, A₁)‖_{L^{p,r}(X)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Commutation {
    /// Outer norm of the slice-wise K-functionals.
    pub lhs: f64,
    /// K-functional of the joint couple.
    pub rhs: f64,
    pub ratio: f64,
    pub method: &'static str,
    pub heuristic: bool,
}

/// Slice-wise versus joint K-functional; the inner couple acts on `Y`-slices.
pub fn k_commutation_ratio(
    f: &ProductStepFunction,
    e: ExponentPair,
    inner: &LatticeCouple,
    s: f64,
    opts: &KOptions,
) -> Result<Commutation> {
    let mut slice_k = Vec::with_capacity(f.x_len());
    for i in 0..f.x_len() {
        let slice = f.slice(i);
        let k = if inner.is_l1_linf() {
            k_exact_l1_linf(&slice, s)
        } else {
            k_lattice_with(&LatticeFunction::Plain(slice), inner, s, opts, None)?.value
        };
        slice_k.push(k);
    }
    let lhs = lorentz_norm(&StepFunction::from_atoms(f.x_space().clone(), &slice_k)?, e);
    let joint = LatticeCouple::joint(e, inner)?;
    let k = k_lattice_with(&LatticeFunction::Product(f.clone()), &joint, s, opts, None)?;
    let (ratio, _) = crate::report::ratio_of(lhs, k.value);
    Ok(Commutation { lhs, rhs: k.value, ratio, method: k.method, heuristic: k.heuristic })
}
