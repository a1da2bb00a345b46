//! Feed-forward logical-error classifier: ReLU hidden layers, softmax
//! output, cross-entropy loss with optional weight decay, Adam training.

mod adam;
mod network;
mod scalar;
mod train;

pub use adam::{adam_step, AdamState};
pub use network::{argmax, softmax_in_place, Network, LOG_FLOOR, NUM_CLASSES};
pub use scalar::Scalar;
pub use train::{train, train_with, CurvePoint, LabeledData, TrainConfig, TrainingCurves};

use crate::error::Result;
use crate::noise::rng_stream;
use rand::Rng;
use rand_distr::StandardNormal;

/// Result of comparing analytic gradients with central finite differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientCheck {
    pub coordinates: usize,
    pub max_relative_error: f64,
}

/// Checks the analytic gradient of a random double-precision network on
/// `coordinates` random parameters, with step `h`. Relative errors use
/// `max(|a|, |n|, 1e-6)` as denominator so exact zeros do not blow up.
pub fn gradient_check(layer_sizes: &[usize], coordinates: usize, h: f64, seed: u64) -> Result<GradientCheck> {
    let mut rng = rng_stream(seed, 0);
    let mut net = Network::<f64>::random(layer_sizes, 0.5, &mut rng)?;
    let batch = 8;
    let x: Vec<f64> = (0..batch * layer_sizes[0]).map(|_| rng.sample(StandardNormal)).collect();
    let y: Vec<u8> = (0..batch).map(|_| rng.gen_range(0..NUM_CLASSES as u8)).collect();
    let lambda = 0.01;
    let analytic = net.gradient(&x, &y, lambda)?.flat_params();
    let mut worst = 0.0f64;
    for _ in 0..coordinates {
        let i = rng.gen_range(0..analytic.len());
        let original = *net.param_mut(i);
        *net.param_mut(i) = original + h;
        let up = net.loss(&x, &y, lambda)?;
        *net.param_mut(i) = original - h;
        let down = net.loss(&x, &y, lambda)?;
        *net.param_mut(i) = original;
        let numeric = (up - down) / (2.0 * h);
        let denom = analytic[i].abs().max(numeric.abs()).max(1e-6);
        worst = worst.max((analytic[i] - numeric).abs() / denom);
    }
    Ok(GradientCheck { coordinates, max_relative_error: worst })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_differences_agree() {
        let check = gradient_check(&[6, 5, 4, 16], 100, 1e-5, 1).unwrap();
        assert!(check.max_relative_error < 1e-4, "{check:?}");
    }
}
