//! Shared fixtures for the criterion benchmarks.

use toric_hld::noise::rng_stream;
use toric_hld::{sample_error, CodeGeometry, Syndrome};

/// Syndromes of `n` depolarizing errors at noise `p` on the `l×l` code.
pub fn sample_syndromes(l: usize, p: f64, n: usize, seed: u64) -> (CodeGeometry, Vec<Syndrome>) {
    let g = CodeGeometry::new(l).expect("valid lattice size");
    let mut rng = rng_stream(seed, 0);
    let syndromes = (0..n)
        .map(|_| g.syndrome_of(&sample_error(&g, p, &mut rng)).expect("matching lengths"))
        .collect();
    (g, syndromes)
}
