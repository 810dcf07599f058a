//! Runs every seeded probe batch and prints the envelope table for
//! `embeddings::bounds::RECORDED`.

use lorentz_lab::embeddings::bounds::{min_max, run_batch, ALL};
use lorentz_lab::embeddings::ProbeConfig;

fn main() {
    let cfg = ProbeConfig::default();
    for batch in ALL {
        let ratios = run_batch(&batch, &cfg).expect("batch runs");
        for (n, r) in batch.sizes.iter().zip(&ratios) {
            let (lo, hi) = min_max(r);
            println!("    Envelope {{ batch: {:?}, size: {n}, floor: {lo:e}, ceiling: {hi:e} }},", batch.name);
        }
    }
}
