//! Minkowski's integral inequality in `L^{p,r}`: exact evaluation of both
//! sides, the four counterexample families, rate fits and plane sweeps.

mod family;
mod fit;
mod sweep;
mod verdict;

pub use family::{
    f41_sides, f42_function, family_eval, family_eval_refined, phi, translated_phi_sides, Discretization, Family,
    FamilyParams,
};
pub use fit::{rate_fit, trend, RateFit, RateModel, Trend};
pub use sweep::{
    cell_seed, forward_theory, random_instance, reverse_theory, sweep_cell, sweep_plane, CellEvidence, CellResult,
    Classification, Ladder, PlaneGrid, RegionMap, SampleSpec, DRIFT_LIMIT, GROWTH_LIMIT, RESIDUAL_LIMIT,
};
pub use verdict::{minkowski_ratio, Direction, MinkowskiVerdict};
