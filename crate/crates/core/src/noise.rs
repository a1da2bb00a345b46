//! Depolarizing noise.
//!
//! All randomness comes from ChaCha8 streams. A stream is addressed by a
//! 64-bit seed and a 64-bit stream id, so the error drawn for a given
//! `(seed, stream)` pair is the same on every platform and independent of
//! how work is split across threads.

use crate::code::{CodeGeometry, PauliChain};
use crate::error::{Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    p: f64,
    pub seed: u64,
}

impl NoiseParams {
    pub fn new(p: f64, seed: u64) -> Result<Self> {
        check_probability("depolarizing parameter", p)?;
        Ok(NoiseParams { p, seed })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

fn check_probability(what: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{what} must lie in [0, 1], got {p}")))
    }
}

/// Converts the full-depolarization probability `q` into the per-qubit
/// Pauli error rate `p = 3q/4`.
pub fn channel_rate_from_q(q: f64) -> Result<f64> {
    check_probability("depolarization probability", q)?;
    Ok(0.75 * q)
}

/// Opens stream `stream` of the generator seeded by `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws one depolarizing error: each edge, in ascending index order, is left
/// alone with probability `1-p` or hit by X, Y or Z with probability `p/3`
/// each. One uniform draw is consumed per edge.
pub fn sample_error<R: Rng + ?Sized>(g: &CodeGeometry, p: f64, rng: &mut R) -> PauliChain {
    let mut chain = PauliChain::identity(g.n_edges());
    let third = p / 3.0;
    for e in 0..g.n_edges() {
        let u: f64 = rng.gen();
        if u < p {
            if u < third {
                chain.apply_x(e);
            } else if u < 2.0 * third {
                chain.apply_x(e);
                chain.apply_z(e);
            } else {
                chain.apply_z(e);
            }
        }
    }
    chain
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_conversion() {
        assert_eq!(channel_rate_from_q(0.0).unwrap(), 0.0);
        assert_eq!(channel_rate_from_q(1.0).unwrap(), 0.75);
        assert!((channel_rate_from_q(0.2).unwrap() - 0.15).abs() < 1e-15);
        assert!(channel_rate_from_q(1.5).is_err());
        assert!(channel_rate_from_q(-0.1).is_err());
        assert!(NoiseParams::new(1.1, 0).is_err());
    }

    #[test]
    fn zero_and_full_noise() {
        let g = CodeGeometry::new(2).unwrap();
        let mut rng = rng_stream(7, 0);
        for _ in 0..100 {
            assert!(sample_error(&g, 0.0, &mut rng).is_identity());
            assert_eq!(sample_error(&g, 1.0, &mut rng).weight(), g.n_edges());
        }
    }

    #[test]
    fn deterministic_per_stream() {
        let g = CodeGeometry::new(5).unwrap();
        let a = sample_error(&g, 0.2, &mut rng_stream(11, 3));
        let b = sample_error(&g, 0.2, &mut rng_stream(11, 3));
        let c = sample_error(&g, 0.2, &mut rng_stream(11, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn single_edge_frequencies() {
        // Binomial oracle: each Pauli occurs with f = p/3 = 1/30, sd = sqrt(f(1-f)/N).
        let g = CodeGeometry::new(2).unwrap();
        let n = 1_000_000usize;
        let p = 0.1;
        let mut rng = rng_stream(12345, 0);
        let (mut nx, mut ny, mut nz) = (0usize, 0usize, 0usize);
        let (mut x_marginal, mut draws) = (0usize, 0usize);
        while draws < n {
            let c = sample_error(&g, p, &mut rng);
            for e in 0..g.n_edges() {
                if draws == n {
                    break;
                }
                draws += 1;
                let (x, z) = (c.x_support().get(e), c.z_support().get(e));
                match (x, z) {
                    (true, false) => nx += 1,
                    (true, true) => ny += 1,
                    (false, true) => nz += 1,
                    _ => {}
                }
                if x {
                    x_marginal += 1;
                }
            }
        }
        let f = p / 3.0;
        let sd = (f * (1.0 - f) / n as f64).sqrt();
        for count in [nx, ny, nz] {
            let freq = count as f64 / n as f64;
            assert!((freq - f).abs() < 5.0 * sd, "freq {freq} vs {f}");
        }
        let fx = 2.0 * p / 3.0;
        let sdx = (fx * (1.0 - fx) / n as f64).sqrt();
        assert!((x_marginal as f64 / n as f64 - fx).abs() < 5.0 * sdx);
    }
}
