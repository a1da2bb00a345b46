use super::network::Network;
use super::scalar::Scalar;
use crate::error::{check_len, Result};

/// Moment estimates and hyperparameters of the Adam optimizer.
#[derive(Debug, Clone)]
pub struct AdamState<T> {
    pub beta1: T,
    pub beta2: T,
    pub epsilon: T,
    steps: u64,
    m: Network<T>,
    v: Network<T>,
}

impl<T: Scalar> AdamState<T> {
    /// Fresh state shaped like `net`, with β₁ = 0.9, β₂ = 0.999, ε = 1e-8.
    pub fn new(net: &Network<T>) -> Self {
        let zeros = Network::zeros(net.layer_sizes()).expect("shape of an existing network");
        AdamState {
            beta1: T::from_f64_lossy(0.9),
            beta2: T::from_f64_lossy(0.999),
            epsilon: T::from_f64_lossy(1e-8),
            steps: 0,
            m: zeros.clone(),
            v: zeros,
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }
}

/// One bias-corrected Adam update of `net` along `grad`.
pub fn adam_step<T: Scalar>(net: &mut Network<T>, grad: &Network<T>, state: &mut AdamState<T>, eta: T) -> Result<()> {
    if net.layer_sizes() != grad.layer_sizes() || net.layer_sizes() != state.m.layer_sizes() {
        check_len(net.n_params(), grad.n_params())?;
        check_len(net.n_params(), state.m.n_params())?;
    }
    state.steps += 1;
    let t = i32::try_from(state.steps).unwrap_or(i32::MAX);
    let (b1, b2, eps) = (state.beta1, state.beta2, state.epsilon);
    let one = T::one();
    let correction1 = one - b1.powi(t);
    let correction2 = one - b2.powi(t);
    let slices = net
        .param_slices_mut()
        .zip(grad.param_slices())
        .zip(state.m.param_slices_mut().zip(state.v.param_slices_mut()));
    for ((theta, g), (m, v)) in slices {
        for i in 0..theta.len() {
            m[i] = b1 * m[i] + (one - b1) * g[i];
            v[i] = b2 * v[i] + (one - b2) * g[i] * g[i];
            let m_hat = m[i] / correction1;
            let v_hat = v[i] / correction2;
            theta[i] = theta[i] - eta * m_hat / (v_hat.sqrt() + eps);
        }
    }
    Ok(())
}
