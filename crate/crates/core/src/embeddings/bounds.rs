//! Seeded probe batches and the ratio envelopes recorded from them.
//!
//! [`RECORDED`] is produced by `cargo run --release --example record_bounds`
//! and checked back by the acceptance suite. The envelopes document observed
//! behaviour; they are not theoretical constants.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{cwikel_probe, identity_instance, identity_report, lemma61_ratio, IdentityKind, IdentityParams};
use super::{ProbeConfig, Regime};
use crate::interp::{lorentz_identity_ratio, InterpParams};
use crate::kfunc::LatticeCouple;
use crate::lorentz::{ExponentPair, StepFunction};
use crate::minkowski::cell_seed;
use crate::Result;

/// A named seeded batch: `draws` random `n × n` instances for every size `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Batch {
    pub name: &'static str,
    pub sizes: &'static [usize],
    pub draws: usize,
    pub seed: u64,
}

pub const CWIKEL_I: Batch = Batch { name: "cwikel-i", sizes: &[2, 4], draws: 50, seed: 11 };
pub const CWIKEL_II: Batch = Batch { name: "cwikel-ii", sizes: &[2, 4], draws: 50, seed: 11 };
pub const COROLLARY12: Batch = Batch { name: "corollary12", sizes: &[2, 4], draws: 8, seed: 7 };
pub const THEOREM11: Batch = Batch { name: "theorem11", sizes: &[2, 4], draws: 6, seed: 7 };
pub const LEMMA61_I: Batch = Batch { name: "lemma61-i", sizes: &[4, 8, 16], draws: 100, seed: 13 };
pub const LEMMA61_II: Batch = Batch { name: "lemma61-ii", sizes: &[4, 8, 16], draws: 100, seed: 13 };
/// Plain random step functions with `n` levels against `(L¹, L^∞)_{θ,q}`.
pub const INTERP_IDENTITY: Batch = Batch { name: "interp-identity", sizes: &[4, 8], draws: 20, seed: 17 };

pub const ALL: [Batch; 7] = [CWIKEL_I, CWIKEL_II, COROLLARY12, THEOREM11, LEMMA61_I, LEMMA61_II, INTERP_IDENTITY];

/// `(p, r, q, θ)` of the Cwikel batches.
pub const CWIKEL_I_EXPONENTS: (f64, f64, f64, f64) = (2.0, 2.0, 1.0, 0.5);
pub const CWIKEL_II_EXPONENTS: (f64, f64, f64, f64) = (1.0, 1.0, 2.0, 0.5);
/// `(p, r)` of the product-space batches: `p ≤ r` and `r ≤ p`.
pub const LEMMA61_I_EXPONENTS: (f64, f64) = (1.0, 2.0);
pub const LEMMA61_II_EXPONENTS: (f64, f64) = (2.0, 1.0);
/// `(θ, q)` of the interpolation identity batch.
pub const INTERP_IDENTITY_PARAMS: (f64, f64) = (0.5, 2.0);

pub fn corollary12_params() -> IdentityParams {
    IdentityParams::corollary(2.0, 4.0, 1.0, 2.0, 0.5)
}

pub fn theorem11_params() -> IdentityParams {
    IdentityParams {
        p0: [2.0, 1.5],
        r0: [1.0, 2.0],
        p1: [4.0, 6.0],
        r1: [2.0, 1.0],
        theta0: 0.25,
        theta1: 0.75,
        theta: 0.5,
        q: 2.0,
    }
}

/// Random plain step function with `n` levels, same distributions as the product instances.
pub fn plain_instance(seed: u64, n: usize, draw: usize) -> StepFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(seed, draw, n));
    let pairs: Vec<(f64, f64)> =
        (0..n).map(|_| (10f64.powf(rng.gen_range(-3.0..=3.0)), rng.gen_range(0.05..1.0))).collect();
    StepFunction::from_pairs(&pairs).expect("positive masses")
}

fn one(batch: &Batch, n: usize, draw: usize, cfg: &ProbeConfig) -> Result<f64> {
    let f = || identity_instance(batch.seed, n, draw);
    let cwikel = |(p, r, q, theta): (f64, f64, f64, f64), regime| -> Result<f64> {
        let ip = InterpParams::new(theta, q)?;
        Ok(cwikel_probe(&f(), ExponentPair::new(p, r)?, ip, &LatticeCouple::l1_linf(), regime, cfg)?.ratio)
    };
    match batch.name {
        "cwikel-i" => cwikel(CWIKEL_I_EXPONENTS, Regime::I),
        "cwikel-ii" => cwikel(CWIKEL_II_EXPONENTS, Regime::II),
        "corollary12" => Ok(identity_report(IdentityKind::Corollary12, &corollary12_params(), &f(), cfg)?.ratio),
        "theorem11" => Ok(identity_report(IdentityKind::Theorem11, &theorem11_params(), &f(), cfg)?.ratio),
        "lemma61-i" => Ok(lemma61_ratio(&f(), ExponentPair::new(LEMMA61_I_EXPONENTS.0, LEMMA61_I_EXPONENTS.1)?).ratio),
        "lemma61-ii" => {
            Ok(lemma61_ratio(&f(), ExponentPair::new(LEMMA61_II_EXPONENTS.0, LEMMA61_II_EXPONENTS.1)?).ratio)
        }
        "interp-identity" => {
            let (theta, q) = INTERP_IDENTITY_PARAMS;
            lorentz_identity_ratio(&plain_instance(batch.seed, n, draw), InterpParams::new(theta, q)?)
        }
        other => Err(crate::Error::InvalidParameter(format!("unknown batch '{other}'"))),
    }
}

/// Ratios of a batch, one vector per size, ordered by draw.
pub fn run_batch(batch: &Batch, cfg: &ProbeConfig) -> Result<Vec<Vec<f64>>> {
    batch
        .sizes
        .iter()
        .map(|&n| (0..batch.draws).into_par_iter().map(|d| one(batch, n, d, cfg)).collect())
        .collect()
}

/// `max/min` of a set of positive ratios.
pub fn spread(ratios: &[f64]) -> f64 {
    let (lo, hi) = min_max(ratios);
    hi / lo
}

pub fn min_max(ratios: &[f64]) -> (f64, f64) {
    ratios.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Observed ratio range of one batch at one size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    pub batch: &'static str,
    pub size: usize,
    pub floor: f64,
    pub ceiling: f64,
}

/// Recorded with the default [`ProbeConfig`].
pub const RECORDED: &[Envelope] = &[
    // recorded-begin
    Envelope { batch: "cwikel-i", size: 2, floor: 9.996303137044285e-1, ceiling: 1.1072651965121239e0 },
    Envelope { batch: "cwikel-i", size: 4, floor: 9.996318114217987e-1, ceiling: 1.1761880528093964e0 },
    Envelope { batch: "cwikel-ii", size: 2, floor: 9.458016896905601e-1, ceiling: 9.998620173385506e-1 },
    Envelope { batch: "cwikel-ii", size: 4, floor: 9.254422273001404e-1, ceiling: 9.993714423719272e-1 },
    Envelope { batch: "corollary12", size: 2, floor: 2.000732023241429e0, ceiling: 2.1811031124746383e0 },
    Envelope { batch: "corollary12", size: 4, floor: 2.0159462165244486e0, ceiling: 2.421458685341873e0 },
    Envelope { batch: "theorem11", size: 2, floor: 7.086241558747935e-1, ceiling: 7.683427947151521e-1 },
    Envelope { batch: "theorem11", size: 4, floor: 7.09588502947864e-1, ceiling: 8.077985263535451e-1 },
    Envelope { batch: "lemma61-i", size: 4, floor: 6.718848066420504e-1, ceiling: 9.974920842516113e-1 },
    Envelope { batch: "lemma61-i", size: 8, floor: 7.046575911656326e-1, ceiling: 9.433560650963263e-1 },
    Envelope { batch: "lemma61-i", size: 16, floor: 8.018036627493388e-1, ceiling: 9.261648750770191e-1 },
    Envelope { batch: "lemma61-ii", size: 4, floor: 1.000735098117559e0, ceiling: 1.3181242736964685e0 },
    Envelope { batch: "lemma61-ii", size: 8, floor: 1.035010270088221e0, ceiling: 1.2917814063225077e0 },
    Envelope { batch: "lemma61-ii", size: 16, floor: 1.0533863720656698e0, ceiling: 1.2139742841290444e0 },
    Envelope { batch: "interp-identity", size: 4, floor: 2.0003513280951593e0, ceiling: 2.2095315828351363e0 },
    Envelope { batch: "interp-identity", size: 8, floor: 2.005431839867896e0, ceiling: 2.2516350283257216e0 },
    // recorded-end
];

pub fn recorded(batch: &str, size: usize) -> Option<Envelope> {
    RECORDED.iter().copied().find(|e| e.batch == batch && e.size == size)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spread_of_ratios() {
        assert_eq!(spread(&[2.0, 1.0, 4.0]), 4.0);
        assert_eq!(min_max(&[3.0]), (3.0, 3.0));
    }

    #[test]
    fn every_batch_has_a_recorded_envelope() {
        for b in ALL {
            for &n in b.sizes {
                let e = recorded(b.name, n).unwrap_or_else(|| panic!("{} at {n}", b.name));
                assert!(e.floor <= e.ceiling);
            }
        }
    }

    #[test]
    fn plain_instances_are_reproducible() {
        assert_eq!(plain_instance(3, 4, 1), plain_instance(3, 4, 1));
        assert_ne!(plain_instance(3, 4, 1), plain_instance(3, 4, 2));
    }
}
