//! Lorentz quasi-norms, mixed Lorentz norms, Peetre K-functionals and real
//! interpolation norms, evaluated exactly (or by certified search) on finite
//! step functions.
//!
//! The crate is organised bottom-up:
//!
//! * [`lorentz`]: measure spaces, step functions, distribution functions,
//!   rearrangements and the exact Lorentz / mixed Lorentz quasi-norms.
//! * [`kfunc`]: K-functional engines (closed form, grid search, descent).
//! * [`interp`]: real interpolation quasi-norms from sampled K-curves.
//! * [`minkowski`]: both sides of Minkowski's integral inequality in
//!   `L^{p,r}`, the four counterexample families, rate fits and plane sweeps.
//! * [`embeddings`]: ratio probes for the Cwikel-type embeddings, the
//!   product-space embedding, the log-convexity inequality and the mixed
//!   interpolation identities.
//! * [`suites`]: named verification suites used by the command line tool.
//!
//! Norm convention: `‖g‖_{p,r} = ‖ρ μ({|g| ≥ ρ})^{1/p}‖_{L^r(ℝ₊, dρ/ρ)}`, so
//! `‖g‖_{p,p} = p^{-1/p} ‖g‖_{L^p}`. Every report states this.

pub mod embeddings;
mod error;
pub mod interp;
pub mod kfunc;
pub mod lorentz;
pub mod minkowski;
pub mod report;
pub mod suites;

pub use error::{Error, Result};

/// Version string embedded into every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Statement of the normalization convention, copied into reports.
pub const NORMALIZATION_NOTE: &str =
    "‖g‖_{p,r} = ‖ρ·μ(|g|≥ρ)^{1/p}‖_{L^r(dρ/ρ)}; hence ‖g‖_{p,p} = p^{-1/p}‖g‖_{L^p}";
