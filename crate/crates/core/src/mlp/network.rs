use super::scalar::Scalar;
use crate::code::LogicalLabel;
use crate::error::{check_len, Error, Result};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Number of output classes: the 16 two-qubit logical Paulis.
pub const NUM_CLASSES: usize = LogicalLabel::COUNT;

/// Probabilities below this are clamped before taking the log.
pub const LOG_FLOOR: f64 = 1e-30;

/// Fully connected classifier: ReLU hidden layers, softmax output.
///
/// Layer `k` maps `layer_sizes[k]` inputs to `layer_sizes[k+1]` outputs with
/// a row-major `out × in` weight matrix. The same type doubles as the
/// gradient container.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar", try_from = "RawNetwork<T>")]
pub struct Network<T> {
    layer_sizes: Vec<usize>,
    weights: Vec<Vec<T>>,
    biases: Vec<Vec<T>>,
}

#[derive(Deserialize)]
#[serde(bound = "T: Scalar")]
struct RawNetwork<T> {
    layer_sizes: Vec<usize>,
    weights: Vec<Vec<T>>,
    biases: Vec<Vec<T>>,
}

impl<T: Scalar> TryFrom<RawNetwork<T>> for Network<T> {
    type Error = Error;

    fn try_from(raw: RawNetwork<T>) -> Result<Self> {
        Network::from_parts(raw.layer_sizes, raw.weights, raw.biases)
    }
}

fn check_sizes(layer_sizes: &[usize]) -> Result<()> {
    if layer_sizes.len() < 2 {
        return Err(Error::InvalidArgument("a network needs an input and an output layer".into()));
    }
    if layer_sizes.contains(&0) {
        return Err(Error::InvalidArgument("layer sizes must be positive".into()));
    }
    if *layer_sizes.last().unwrap() != NUM_CLASSES {
        return Err(Error::InvalidArgument(format!("output layer must have {NUM_CLASSES} units")));
    }
    Ok(())
}

/// Numerically stable softmax of one row of logits.
pub fn softmax_in_place<T: Scalar>(row: &mut [T]) {
    let max = row.iter().copied().fold(T::neg_infinity(), T::max);
    let mut total = T::zero();
    for v in row.iter_mut() {
        *v = (*v - max).exp();
        total = total + *v;
    }
    for v in row.iter_mut() {
        *v = *v / total;
    }
}

/// Index of the largest entry; the lowest index wins ties.
pub fn argmax<T: Scalar>(row: &[T]) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = i;
        }
    }
    best
}

impl<T: Scalar> Network<T> {
    pub fn zeros(layer_sizes: &[usize]) -> Result<Self> {
        check_sizes(layer_sizes)?;
        let pairs = layer_sizes.windows(2);
        Ok(Network {
            layer_sizes: layer_sizes.to_vec(),
            weights: pairs.clone().map(|w| vec![T::zero(); w[0] * w[1]]).collect(),
            biases: pairs.map(|w| vec![T::zero(); w[1]]).collect(),
        })
    }

    /// Every parameter drawn from `Normal(0, width)`, layer by layer,
    /// weights before biases.
    pub fn random<R: Rng + ?Sized>(layer_sizes: &[usize], width: f64, rng: &mut R) -> Result<Self> {
        let normal = Normal::new(0.0, width)
            .map_err(|e| Error::InvalidArgument(format!("initialization width {width}: {e}")))?;
        let mut net = Self::zeros(layer_sizes)?;
        for k in 0..net.n_layers() {
            for slot in net.weights[k].iter_mut().chain(net.biases[k].iter_mut()) {
                *slot = T::from_f64_lossy(normal.sample(rng));
            }
        }
        Ok(net)
    }

    pub fn from_parts(layer_sizes: Vec<usize>, weights: Vec<Vec<T>>, biases: Vec<Vec<T>>) -> Result<Self> {
        check_sizes(&layer_sizes)?;
        let n = layer_sizes.len() - 1;
        check_len(n, weights.len())?;
        check_len(n, biases.len())?;
        for k in 0..n {
            check_len(layer_sizes[k] * layer_sizes[k + 1], weights[k].len())?;
            check_len(layer_sizes[k + 1], biases[k].len())?;
        }
        Ok(Network { layer_sizes, weights, biases })
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn input_len(&self) -> usize {
        self.layer_sizes[0]
    }

    /// Number of weight layers.
    pub fn n_layers(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self, layer: usize) -> &[T] {
        &self.weights[layer]
    }

    pub fn biases(&self, layer: usize) -> &[T] {
        &self.biases[layer]
    }

    pub fn weights_mut(&mut self, layer: usize) -> &mut [T] {
        &mut self.weights[layer]
    }

    pub fn biases_mut(&mut self, layer: usize) -> &mut [T] {
        &mut self.biases[layer]
    }

    pub fn n_params(&self) -> usize {
        self.weights.iter().chain(&self.biases).map(Vec::len).sum()
    }

    /// Parameter slices in a fixed order: `W₀, b₀, W₁, b₁, …`.
    pub fn param_slices(&self) -> impl Iterator<Item = &[T]> {
        self.weights.iter().zip(&self.biases).flat_map(|(w, b)| [w.as_slice(), b.as_slice()])
    }

    pub fn param_slices_mut(&mut self) -> impl Iterator<Item = &mut [T]> {
        self.weights
            .iter_mut()
            .zip(self.biases.iter_mut())
            .flat_map(|(w, b)| [w.as_mut_slice(), b.as_mut_slice()])
    }

    /// Parameter `i` in the [`param_slices`](Self::param_slices) order.
    pub fn param_mut(&mut self, mut i: usize) -> &mut T {
        for slice in self.param_slices_mut() {
            if i < slice.len() {
                return &mut slice[i];
            }
            i -= slice.len();
        }
        panic!("parameter index out of range");
    }

    pub fn flat_params(&self) -> Vec<T> {
        self.param_slices().flatten().copied().collect()
    }

    pub fn squared_norm(&self) -> T {
        self.param_slices().flatten().map(|&v| v * v).sum()
    }

    pub fn cast<U: Scalar>(&self) -> Network<U> {
        let conv = |v: &Vec<T>| v.iter().map(|x| U::from_f64_lossy(x.to_f64().unwrap())).collect();
        Network {
            layer_sizes: self.layer_sizes.clone(),
            weights: self.weights.iter().map(conv).collect(),
            biases: self.biases.iter().map(conv).collect(),
        }
    }

    fn check_batch(&self, inputs: &[T], batch: usize) -> Result<()> {
        check_len(batch * self.input_len(), inputs.len())
    }

    /// Activations of every layer for a row-major batch; the last entry
    /// holds the output logits.
    fn activations(&self, inputs: &[T], batch: usize) -> Vec<Vec<T>> {
        let mut acts: Vec<Vec<T>> = Vec::with_capacity(self.n_layers() + 1);
        acts.push(inputs.to_vec());
        for k in 0..self.n_layers() {
            let (n_in, n_out) = (self.layer_sizes[k], self.layer_sizes[k + 1]);
            let mut z = Vec::with_capacity(batch * n_out);
            for _ in 0..batch {
                z.extend_from_slice(&self.biases[k]);
            }
            T::gemm(batch, n_in, n_out, &acts[k], (n_in, 1), &self.weights[k], (1, n_in), T::one(), &mut z, (n_out, 1));
            if k + 1 < self.n_layers() {
                for v in z.iter_mut() {
                    *v = v.max(T::zero());
                }
            }
            acts.push(z);
        }
        acts
    }

    /// Output logits for a row-major batch of inputs.
    pub fn logits(&self, inputs: &[T], batch: usize) -> Result<Vec<T>> {
        self.check_batch(inputs, batch)?;
        Ok(self.activations(inputs, batch).pop().unwrap())
    }

    /// Class probabilities for a row-major batch.
    pub fn probabilities(&self, inputs: &[T], batch: usize) -> Result<Vec<T>> {
        let mut out = self.logits(inputs, batch)?;
        for row in out.chunks_mut(NUM_CLASSES) {
            softmax_in_place(row);
        }
        Ok(out)
    }

    /// Class probabilities for a single input.
    pub fn forward(&self, x: &[T]) -> Result<Vec<T>> {
        self.probabilities(x, 1)
    }

    pub fn predict(&self, x: &[T]) -> Result<LogicalLabel> {
        let logits = self.logits(x, 1)?;
        Ok(label_of(argmax(&logits)))
    }

    pub fn predict_batch(&self, inputs: &[T], batch: usize) -> Result<Vec<LogicalLabel>> {
        let logits = self.logits(inputs, batch)?;
        Ok(logits.chunks(NUM_CLASSES).map(|row| label_of(argmax(row))).collect())
    }

    /// Mean negative log-likelihood plus `lambda·‖θ‖²`.
    pub fn loss(&self, inputs: &[T], labels: &[u8], lambda: T) -> Result<T> {
        let probs = self.probabilities(inputs, labels.len())?;
        Ok(nll(&probs, labels)? + lambda * self.squared_norm())
    }

    /// Loss and its exact gradient with respect to every parameter.
    pub fn loss_and_gradient(&self, inputs: &[T], labels: &[u8], lambda: T) -> Result<(T, Network<T>)> {
        let batch = labels.len();
        if batch == 0 {
            return Err(Error::InvalidArgument("empty batch".into()));
        }
        self.check_batch(inputs, batch)?;
        let mut acts = self.activations(inputs, batch);
        let mut dz = acts.pop().unwrap();
        for row in dz.chunks_mut(NUM_CLASSES) {
            softmax_in_place(row);
        }
        let loss = nll(&dz, labels)? + lambda * self.squared_norm();
        let inv_batch = T::one() / T::from_usize(batch).unwrap();
        for (row, &label) in dz.chunks_mut(NUM_CLASSES).zip(labels) {
            row[label as usize] = row[label as usize] - T::one();
            for v in row.iter_mut() {
                *v = *v * inv_batch;
            }
        }
        let two_lambda = lambda + lambda;
        let mut grad = self.clone();
        for k in (0..self.n_layers()).rev() {
            let (n_in, n_out) = (self.layer_sizes[k], self.layer_sizes[k + 1]);
            let gw = &mut grad.weights[k];
            for v in gw.iter_mut() {
                *v = *v * two_lambda;
            }
            T::gemm(n_out, batch, n_in, &dz, (1, n_out), &acts[k], (n_in, 1), T::one(), gw, (n_in, 1));
            let gb = &mut grad.biases[k];
            for v in gb.iter_mut() {
                *v = *v * two_lambda;
            }
            for row in dz.chunks(n_out) {
                for (g, &d) in gb.iter_mut().zip(row) {
                    *g = *g + d;
                }
            }
            if k > 0 {
                let mut da = vec![T::zero(); batch * n_in];
                T::gemm(batch, n_out, n_in, &dz, (n_out, 1), &self.weights[k], (n_in, 1), T::zero(), &mut da, (n_in, 1));
                for (d, &a) in da.iter_mut().zip(&acts[k]) {
                    if a <= T::zero() {
                        *d = T::zero();
                    }
                }
                dz = da;
            }
        }
        Ok((loss, grad))
    }

    pub fn gradient(&self, inputs: &[T], labels: &[u8], lambda: T) -> Result<Network<T>> {
        Ok(self.loss_and_gradient(inputs, labels, lambda)?.1)
    }
}

fn label_of(i: usize) -> LogicalLabel {
    LogicalLabel::new(i as u8).expect("class index below 16")
}

fn nll<T: Scalar>(probs: &[T], labels: &[u8]) -> Result<T> {
    let floor = T::from_f64_lossy(LOG_FLOOR);
    let mut total = T::zero();
    for (row, &label) in probs.chunks(NUM_CLASSES).zip(labels) {
        if label as usize >= NUM_CLASSES {
            return Err(Error::InvalidArgument(format!("label {label} out of range")));
        }
        total = total - row[label as usize].max(floor).ln();
    }
    Ok(total / T::from_usize(labels.len()).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::rng_stream;

    #[test]
    fn shapes_are_validated() {
        assert!(Network::<f64>::zeros(&[4]).is_err());
        assert!(Network::<f64>::zeros(&[4, 0, 16]).is_err());
        assert!(Network::<f64>::zeros(&[4, 8]).is_err());
        let net = Network::<f64>::zeros(&[6, 5, 4, 16]).unwrap();
        assert_eq!(net.n_params(), 6 * 5 + 5 + 5 * 4 + 4 + 4 * 16 + 16);
        assert!(net.forward(&[0.0; 5]).is_err());
        assert!(Network::<f64>::from_parts(vec![2, 16], vec![vec![0.0; 31]], vec![vec![0.0; 16]]).is_err());
    }

    #[test]
    fn zero_network_is_uniform_and_predicts_zero() {
        let net = Network::<f64>::zeros(&[6, 5, 16]).unwrap();
        let y = net.forward(&[1.0, 0.0, 1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(y.iter().all(|&v| (v - 1.0 / 16.0).abs() < 1e-15));
        assert_eq!(net.predict(&[0.0; 6]).unwrap(), LogicalLabel::IDENTITY);
        let loss = net.loss(&[0.0; 12], &[3, 9], 0.5).unwrap();
        assert!((loss - 16f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn softmax_shift_invariance_and_one_hot() {
        let mut rng = rng_stream(1, 0);
        for _ in 0..100 {
            let logits: Vec<f64> = (0..16).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let shifted: Vec<f64> = logits.iter().map(|v| v + 3.25).collect();
            let (mut a, mut b) = (logits.clone(), shifted.clone());
            softmax_in_place(&mut a);
            softmax_in_place(&mut b);
            assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
            assert_eq!(argmax(&logits), argmax(&shifted));
        }
        let mut one_hot = [0.0f64; 16];
        one_hot[7] = 50.0;
        assert_eq!(argmax(&one_hot), 7);
    }

    #[test]
    fn output_layer_bias_gradient_only_for_zero_inputs() {
        let net = Network::<f64>::zeros(&[6, 5, 4, 16]).unwrap();
        let g = net.gradient(&[0.0; 12], &[2, 2], 0.0).unwrap();
        for k in 0..3 {
            assert!(g.weights(k).iter().all(|&v| v == 0.0));
        }
        assert!(g.biases(0).iter().chain(g.biases(1)).all(|&v| v == 0.0));
        assert!(g.biases(2).iter().any(|&v| v != 0.0));
    }

    #[test]
    fn decay_gradient_is_two_lambda_theta() {
        let mut rng = rng_stream(2, 0);
        let net = Network::<f64>::random(&[3, 4, 16], 0.3, &mut rng).unwrap();
        let x = [0.2, -0.4, 1.0];
        let g0 = net.gradient(&x, &[5], 0.0).unwrap().flat_params();
        let g1 = net.gradient(&x, &[5], 0.25).unwrap().flat_params();
        for ((a, b), t) in g0.iter().zip(&g1).zip(net.flat_params()) {
            assert!((b - a - 0.5 * t).abs() < 1e-12);
        }
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let mut rng = rng_stream(3, 0);
        let net = Network::<f32>::random(&[4, 3, 16], 0.1, &mut rng).unwrap();
        let text = serde_json::to_string(&net).unwrap();
        let back: Network<f32> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, net);
        let broken = text.replacen("[4,3,16]", "[4,2,16]", 1);
        assert!(serde_json::from_str::<Network<f32>>(&broken).is_err());
    }
}
