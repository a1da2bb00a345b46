use super::adam::{adam_step, AdamState};
use super::network::{argmax, Network, NUM_CLASSES};
use super::scalar::Scalar;
use crate::error::{check_len, Error, Result};
use crate::noise::rng_stream;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

/// Training loss is tracked on at most this many fixed training examples.
const MONITOR_SAMPLES: usize = 10_000;

/// Binary inputs (one byte per feature, 0 or 1) with class labels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabeledData {
    input_len: usize,
    inputs: Vec<u8>,
    labels: Vec<u8>,
}

impl LabeledData {
    pub fn new(input_len: usize) -> Self {
        LabeledData { input_len, inputs: Vec::new(), labels: Vec::new() }
    }

    pub fn with_capacity(input_len: usize, n: usize) -> Self {
        LabeledData { input_len, inputs: Vec::with_capacity(n * input_len), labels: Vec::with_capacity(n) }
    }

    pub fn push(&mut self, input: impl IntoIterator<Item = bool>, label: u8) -> Result<()> {
        if label as usize >= NUM_CLASSES {
            return Err(Error::Format(format!("label {label} out of range")));
        }
        let start = self.inputs.len();
        self.inputs.extend(input.into_iter().map(u8::from));
        if let Err(e) = check_len(self.input_len, self.inputs.len() - start) {
            self.inputs.truncate(start);
            return Err(e);
        }
        self.labels.push(label);
        Ok(())
    }

    pub fn input_len(&self) -> usize {
        self.input_len
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn input(&self, i: usize) -> &[u8] {
        &self.inputs[i * self.input_len..(i + 1) * self.input_len]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Row-major float inputs and labels for the examples in `indices`.
    pub fn gather<T: Scalar>(&self, indices: &[usize]) -> (Vec<T>, Vec<u8>) {
        let mut x = Vec::with_capacity(indices.len() * self.input_len);
        let mut y = Vec::with_capacity(indices.len());
        for &i in indices {
            x.extend(self.input(i).iter().map(|&b| if b == 0 { T::zero() } else { T::one() }));
            y.push(self.labels[i]);
        }
        (x, y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub hidden_layers: Vec<usize>,
    pub n_it: usize,
    pub eta: f64,
    pub batch_size: usize,
    pub lambda: f64,
    pub init_width: f64,
    pub seed: u64,
    pub validation_fraction: f64,
    pub validation_interval: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            hidden_layers: vec![500, 250],
            n_it: 100_000,
            eta: 0.001,
            batch_size: 1000,
            lambda: 0.0,
            init_width: 0.01,
            seed: 0,
            validation_fraction: 0.05,
            validation_interval: 1000,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.into()));
        if self.hidden_layers.contains(&0) {
            return bad("hidden layer sizes must be positive");
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return bad("learning rate must be positive");
        }
        if self.batch_size == 0 {
            return bad("batch size must be positive");
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad("weight decay must be non-negative");
        }
        if !(self.init_width >= 0.0 && self.init_width.is_finite()) {
            return bad("initialization width must be non-negative");
        }
        if !(0.0..1.0).contains(&self.validation_fraction) {
            return bad("validation fraction must lie in [0, 1)");
        }
        if self.validation_interval == 0 {
            return bad("validation interval must be positive");
        }
        Ok(())
    }

    pub fn layer_sizes(&self, input_len: usize) -> Vec<usize> {
        let mut sizes = vec![input_len];
        sizes.extend(&self.hidden_layers);
        sizes.push(NUM_CLASSES);
        sizes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub iteration: usize,
    pub train_loss: f64,
    pub validation_loss: Option<f64>,
    pub validation_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainingCurves {
    pub points: Vec<CurvePoint>,
}

impl TrainingCurves {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for p in &self.points {
            w.serialize(p)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn read_csv<R: std::io::Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let points = r.deserialize().collect::<std::result::Result<_, _>>()?;
        Ok(TrainingCurves { points })
    }
}

struct Evaluation {
    loss: f64,
    error: f64,
}

fn evaluate(net: &Network<f32>, data: &LabeledData, indices: &[usize], lambda: f64) -> Result<Evaluation> {
    let mut nll = 0.0;
    let mut wrong = 0usize;
    for chunk in indices.chunks(1000) {
        let (x, y) = data.gather::<f32>(chunk);
        let probs = net.probabilities(&x, chunk.len())?;
        for (row, &label) in probs.chunks(NUM_CLASSES).zip(&y) {
            nll -= f64::from(row[label as usize]).max(super::network::LOG_FLOOR).ln();
            if argmax(row) != label as usize {
                wrong += 1;
            }
        }
    }
    let n = indices.len() as f64;
    Ok(Evaluation {
        loss: nll / n + lambda * f64::from(net.squared_norm()),
        error: wrong as f64 / n,
    })
}

/// Trains a single-precision network with Adam on mini-batches drawn with
/// replacement. `on_point` sees each curve point as it is recorded.
pub fn train_with<F>(data: &LabeledData, cfg: &TrainConfig, mut on_point: F) -> Result<(Network<f32>, TrainingCurves)>
where
    F: FnMut(&CurvePoint),
{
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::InvalidArgument("training set is empty".into()));
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(&mut rng_stream(cfg.seed, 0));
    let n_val = (cfg.validation_fraction * data.len() as f64).floor() as usize;
    let (val_idx, train_idx) = order.split_at(n_val);
    if train_idx.is_empty() {
        return Err(Error::InvalidArgument("no training examples left after the validation split".into()));
    }
    let monitor = &train_idx[..train_idx.len().min(MONITOR_SAMPLES)];

    let mut net = Network::<f32>::random(&cfg.layer_sizes(data.input_len()), cfg.init_width, &mut rng_stream(cfg.seed, 1))?;
    let mut state = AdamState::new(&net);
    let mut batch_rng = rng_stream(cfg.seed, 2);
    let eta = cfg.eta as f32;
    let lambda = cfg.lambda as f32;
    let mut curves = TrainingCurves::default();
    let mut batch = vec![0usize; cfg.batch_size];

    for it in 0..=cfg.n_it {
        if it % cfg.validation_interval == 0 {
            let train = evaluate(&net, data, monitor, cfg.lambda)?;
            let val = if val_idx.is_empty() { None } else { Some(evaluate(&net, data, val_idx, cfg.lambda)?) };
            let point = CurvePoint {
                iteration: it,
                train_loss: train.loss,
                validation_loss: val.as_ref().map(|v| v.loss),
                validation_error: val.as_ref().map(|v| v.error),
            };
            on_point(&point);
            curves.points.push(point);
        }
        if it == cfg.n_it {
            break;
        }
        for slot in batch.iter_mut() {
            *slot = train_idx[batch_rng.gen_range(0..train_idx.len())];
        }
        let (x, y) = data.gather::<f32>(&batch);
        let (_, grad) = net.loss_and_gradient(&x, &y, lambda)?;
        adam_step(&mut net, &grad, &mut state, eta)?;
    }
    Ok((net, curves))
}

pub fn train(data: &LabeledData, cfg: &TrainConfig) -> Result<(Network<f32>, TrainingCurves)> {
    train_with(data, cfg, |_| {})
}
