//! Ratio probes for the Cwikel-type embeddings, the product-space embedding,
//! the log-convexity inequalities and the mixed interpolation identities.
//!
//! The identities hold only up to unknown equivalence constants, so every
//! probe reports observed ratios; none asserts a specific constant.

pub mod bounds;
mod cwikel;
mod identity;
mod simple;

pub use cwikel::{cwikel_probe, Regime};
pub use identity::{identity_instance, identity_probe, identity_report, IdentityKind, IdentityParams};
pub use simple::{lemma61_ratio, log_convexity_probe, log_convexity_variant};

use crate::kfunc::{BruteConfig, GridSpec, KOptions};

/// K-curve sampling used by the probes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeConfig {
    pub grid: GridSpec,
    pub k: KOptions,
}

impl Default for ProbeConfig {
    /// 128 samples over 6 decades and a coarse brute-force budget of `2¹²`
    /// points; the refinement stage makes the result insensitive to the budget.
    fn default() -> Self {
        Self {
            grid: GridSpec { count: 128, span_decades: 6.0 },
            k: KOptions { brute: BruteConfig { budget: 1 << 12, ..BruteConfig::default() }, ..KOptions::default() },
        }
    }
}

/// Statement attached to every identity and embedding report.
pub const RATIO_ONLY_NOTE: &str =
    "equivalence constants are unknown: observed ratios are evidence of boundedness, not of a specific constant";
