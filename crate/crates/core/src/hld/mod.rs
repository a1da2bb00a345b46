//! High-level decoding: an underlying decoder followed by a classifier that
//! predicts the residual logical error, plus the data and evaluation
//! plumbing around it.

mod dataset;
mod model;

pub use dataset::{Dataset, DatasetHeader, FORMAT_VERSION, HEADER_LEN, MAGIC};
pub use model::{ModelFile, MODEL_FORMAT_VERSION};

use crate::code::{CodeGeometry, LogicalLabel, PauliChain, Syndrome};
use crate::error::{Error, Result};
use crate::matching::Underlying;
use crate::mlp::Network;
use crate::noise::{rng_stream, sample_error};
use crate::symmetry::{relabel_logical, wrapped_decode, SymmetryMode};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Errors are sampled in chunks of this many; chunk `c` draws from RNG
/// stream `c`, so results do not depend on the number of workers.
pub const CHUNK_SIZE: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HldConfig {
    pub l: usize,
    pub underlying: Underlying,
    pub symmetry: SymmetryMode,
    pub p_train: f64,
    pub n_samples: usize,
    pub seed: u64,
}

/// A canonicalized syndrome and the logical class, in the canonical frame,
/// left behind by the wrapped underlying decoder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingSample {
    pub input: Syndrome,
    pub label: LogicalLabel,
}

pub fn make_sample(g: &CodeGeometry, underlying: Underlying, mode: SymmetryMode, e: &PauliChain) -> Result<TrainingSample> {
    let s = g.syndrome_of(e)?;
    let (input, t) = mode.canonicalize(g, &s)?;
    let r = wrapped_decode(g, underlying, mode, &s)?;
    let residual = g.logical_class(&e.multiply(&r)?)?;
    Ok(TrainingSample { input, label: relabel_logical(residual, &t) })
}

fn chunk_bounds(n: usize) -> impl IndexedParallelIterator<Item = (u64, usize)> {
    let n_chunks = n.div_ceil(CHUNK_SIZE);
    (0..n_chunks).into_par_iter().map(move |c| (c as u64, CHUNK_SIZE.min(n - c * CHUNK_SIZE)))
}

pub fn generate_dataset(cfg: &HldConfig) -> Result<Dataset> {
    let g = CodeGeometry::new(cfg.l)?;
    if !(0.0..=1.0).contains(&cfg.p_train) {
        return Err(Error::InvalidArgument(format!("noise parameter {} outside [0, 1]", cfg.p_train)));
    }
    let chunks: Vec<Vec<TrainingSample>> = chunk_bounds(cfg.n_samples)
        .map(|(c, len)| {
            let mut rng = rng_stream(cfg.seed, c);
            (0..len)
                .map(|_| make_sample(&g, cfg.underlying, cfg.symmetry, &sample_error(&g, cfg.p_train, &mut rng)))
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(Dataset {
        header: DatasetHeader {
            l: cfg.l,
            p_train: cfg.p_train,
            underlying: cfg.underlying,
            symmetry: cfg.symmetry,
            seed: cfg.seed,
            count: cfg.n_samples as u64,
        },
        samples: chunks.into_iter().flatten().collect(),
    })
}

/// Recovery of the underlying decoder wrapped per `mode`, multiplied by the
/// logical operator that `predict` names for the canonical syndrome.
pub fn post_correct<F>(g: &CodeGeometry, underlying: Underlying, mode: SymmetryMode, s: &Syndrome, predict: F) -> Result<PauliChain>
where
    F: FnOnce(&Syndrome) -> Result<LogicalLabel>,
{
    let (canonical, t) = mode.canonicalize(g, s)?;
    let mut r = wrapped_decode(g, underlying, mode, s)?;
    let label = relabel_logical(predict(&canonical)?, &t);
    r.mul_assign(&g.logical_correction(label))?;
    Ok(r)
}

/// Anything that maps syndromes to recoveries.
pub trait Decoder: Sync {
    fn name(&self) -> String;

    fn decode_batch(&self, g: &CodeGeometry, syndromes: &[Syndrome]) -> Result<Vec<PauliChain>>;
}

/// An underlying decoder, optionally wrapped with canonicalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WrappedDecoder {
    pub underlying: Underlying,
    pub symmetry: SymmetryMode,
}

impl Decoder for WrappedDecoder {
    fn name(&self) -> String {
        match self.symmetry {
            SymmetryMode::None => self.underlying.to_string(),
            mode => format!("{}-{mode}", self.underlying),
        }
    }

    fn decode_batch(&self, g: &CodeGeometry, syndromes: &[Syndrome]) -> Result<Vec<PauliChain>> {
        syndromes.iter().map(|s| wrapped_decode(g, self.underlying, self.symmetry, s)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HighLevelDecoder {
    pub underlying: Underlying,
    pub symmetry: SymmetryMode,
    pub network: Network<f32>,
}

impl HighLevelDecoder {
    pub fn new(g: &CodeGeometry, underlying: Underlying, symmetry: SymmetryMode, network: Network<f32>) -> Result<Self> {
        if network.input_len() != g.syndrome_len() {
            return Err(Error::ConfigMismatch(format!(
                "network expects {} inputs, the L = {} code has {} syndrome bits",
                network.input_len(),
                g.l(),
                g.syndrome_len()
            )));
        }
        Ok(HighLevelDecoder { underlying, symmetry, network })
    }

    pub fn from_model(g: &CodeGeometry, model: &ModelFile) -> Result<Self> {
        if model.l != g.l() {
            return Err(Error::ConfigMismatch(format!("model was trained for L = {}, not {}", model.l, g.l())));
        }
        Self::new(g, model.underlying, model.symmetry, model.network.clone())
    }

    pub fn decode(&self, g: &CodeGeometry, s: &Syndrome) -> Result<PauliChain> {
        post_correct(g, self.underlying, self.symmetry, s, |canonical| {
            let x: Vec<f32> = canonical.bits().iter().map(f32::from).collect();
            self.network.predict(&x)
        })
    }
}

impl Decoder for HighLevelDecoder {
    fn name(&self) -> String {
        format!("hld-{}-{}", self.underlying, self.symmetry)
    }

    fn decode_batch(&self, g: &CodeGeometry, syndromes: &[Syndrome]) -> Result<Vec<PauliChain>> {
        let mut canonical = Vec::with_capacity(syndromes.len());
        let mut x = Vec::with_capacity(syndromes.len() * g.syndrome_len());
        for s in syndromes {
            let (c, t) = self.symmetry.canonicalize(g, s)?;
            x.extend(c.bits().iter().map(f32::from));
            canonical.push(t);
        }
        let labels = self.network.predict_batch(&x, syndromes.len())?;
        syndromes
            .iter()
            .zip(canonical.iter().zip(labels))
            .map(|(s, (t, label))| {
                let mut r = wrapped_decode(g, self.underlying, self.symmetry, s)?;
                r.mul_assign(&g.logical_correction(relabel_logical(label, t)))?;
                Ok(r)
            })
            .collect()
    }
}

/// Failures `k` out of `n` trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ErrorCount {
    pub failures: u64,
    pub trials: u64,
}

impl ErrorCount {
    pub fn rate(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }
}

/// Monte Carlo failure counts of several decoders on the same sampled
/// errors (common random numbers).
pub fn shared_error_counts(g: &CodeGeometry, decoders: &[&dyn Decoder], p: f64, n_trials: usize, seed: u64) -> Result<Vec<ErrorCount>> {
    if n_trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("noise parameter {p} outside [0, 1]")));
    }
    let per_chunk: Vec<Vec<u64>> = chunk_bounds(n_trials)
        .map(|(c, len)| {
            let mut rng = rng_stream(seed, c);
            let errors: Vec<PauliChain> = (0..len).map(|_| sample_error(g, p, &mut rng)).collect();
            let syndromes = errors.iter().map(|e| g.syndrome_of(e)).collect::<Result<Vec<_>>>()?;
            decoders
                .iter()
                .map(|d| {
                    let recoveries = d.decode_batch(g, &syndromes)?;
                    let mut k = 0;
                    for (e, r) in errors.iter().zip(&recoveries) {
                        if !g.is_success(e, r)? {
                            k += 1;
                        }
                    }
                    Ok(k)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok((0..decoders.len())
        .map(|i| ErrorCount { failures: per_chunk.iter().map(|v| v[i]).sum(), trials: n_trials as u64 })
        .collect())
}

pub fn logical_error_rate(g: &CodeGeometry, decoder: &dyn Decoder, p: f64, n_trials: usize, seed: u64) -> Result<ErrorCount> {
    Ok(shared_error_counts(g, &[decoder], p, n_trials, seed)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::rng_stream;

    fn cfg(n: usize) -> HldConfig {
        HldConfig { l: 3, underlying: Underlying::Mwpm, symmetry: SymmetryMode::Align, p_train: 0.1, n_samples: n, seed: 4 }
    }

    #[test]
    fn trivial_errors_give_trivial_samples() {
        let g = CodeGeometry::new(3).unwrap();
        for mode in [SymmetryMode::None, SymmetryMode::Center, SymmetryMode::Align] {
            let s = make_sample(&g, Underlying::Mwpm, mode, &PauliChain::identity(18)).unwrap();
            assert!(s.input.is_trivial());
            assert_eq!(s.label, LogicalLabel::IDENTITY);
            let star = g.star_operator(4).unwrap();
            let s = make_sample(&g, Underlying::Trivial, mode, &star).unwrap();
            assert!(s.input.is_trivial());
            assert_eq!(s.label, LogicalLabel::IDENTITY);
        }
    }

    #[test]
    fn dataset_roundtrip_and_determinism() {
        let d = generate_dataset(&cfg(5000)).unwrap();
        assert_eq!(d.samples.len(), 5000);
        let mut a = Vec::new();
        d.write(&mut a).unwrap();
        let mut b = Vec::new();
        generate_dataset(&cfg(5000)).unwrap().write(&mut b).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), HEADER_LEN + 5000 * (3 + 1));
        assert_eq!(Dataset::read(a.as_slice()).unwrap(), d);
    }

    #[test]
    fn empty_dataset_has_header_only() {
        let d = generate_dataset(&cfg(0)).unwrap();
        let mut buf = Vec::new();
        d.write(&mut buf).unwrap();
        assert_eq!(buf.len(), HEADER_LEN);
        assert_eq!(&buf[..8], MAGIC);
        assert!(Dataset::read(buf.as_slice()).unwrap().samples.is_empty());
    }

    #[test]
    fn corrupt_files_are_format_errors() {
        let d = generate_dataset(&cfg(10)).unwrap();
        let mut buf = Vec::new();
        d.write(&mut buf).unwrap();
        let mut bad_magic = buf.clone();
        bad_magic[0] = b'X';
        assert!(matches!(Dataset::read(bad_magic.as_slice()), Err(Error::Format(_))));
        assert!(matches!(Dataset::read(&buf[..buf.len() - 1]), Err(Error::Format(_))));
        let mut bad_label = buf.clone();
        *bad_label.last_mut().unwrap() = 16;
        assert!(matches!(Dataset::read(bad_label.as_slice()), Err(Error::Format(_))));
        let mut trailing = buf;
        trailing.push(0);
        assert!(matches!(Dataset::read(trailing.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn true_labels_always_succeed() {
        for l in [3, 5] {
            let g = CodeGeometry::new(l).unwrap();
            let mut rng = rng_stream(l as u64, 3);
            for mode in [SymmetryMode::None, SymmetryMode::Center, SymmetryMode::Align] {
                for underlying in [Underlying::Mwpm, Underlying::Trivial] {
                    for _ in 0..300 {
                        let e = sample_error(&g, 0.12, &mut rng);
                        let s = g.syndrome_of(&e).unwrap();
                        let sample = make_sample(&g, underlying, mode, &e).unwrap();
                        let r = post_correct(&g, underlying, mode, &s, |c| {
                            assert_eq!(c, &sample.input);
                            Ok(sample.label)
                        })
                        .unwrap();
                        assert_eq!(g.syndrome_of(&r).unwrap(), s);
                        assert!(g.is_success(&e, &r).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn zero_network_matches_wrapped_decoder() {
        let g = CodeGeometry::new(3).unwrap();
        let net = Network::<f32>::zeros(&[18, 4, 16]).unwrap();
        let hld = HighLevelDecoder::new(&g, Underlying::Mwpm, SymmetryMode::Align, net).unwrap();
        let plain = WrappedDecoder { underlying: Underlying::Mwpm, symmetry: SymmetryMode::Align };
        let mut rng = rng_stream(8, 0);
        let syndromes: Vec<_> = (0..200).map(|_| g.syndrome_of(&sample_error(&g, 0.1, &mut rng)).unwrap()).collect();
        assert_eq!(hld.decode_batch(&g, &syndromes).unwrap(), plain.decode_batch(&g, &syndromes).unwrap());
        for s in &syndromes {
            assert_eq!(hld.decode(&g, s).unwrap(), wrapped_decode(&g, Underlying::Mwpm, SymmetryMode::Align, s).unwrap());
        }
        assert!(hld.decode(&g, &Syndrome::zeros(18)).unwrap().is_identity());
        let wrong = Network::<f32>::zeros(&[50, 16]).unwrap();
        assert!(matches!(
            HighLevelDecoder::new(&g, Underlying::Mwpm, SymmetryMode::None, wrong),
            Err(Error::ConfigMismatch(_))
        ));
    }

    #[test]
    fn error_rates() {
        let g = CodeGeometry::new(3).unwrap();
        let mwpm = WrappedDecoder { underlying: Underlying::Mwpm, symmetry: SymmetryMode::None };
        let trivial = WrappedDecoder { underlying: Underlying::Trivial, symmetry: SymmetryMode::None };
        assert_eq!(logical_error_rate(&g, &mwpm, 0.0, 1000, 1).unwrap().failures, 0);
        let counts = shared_error_counts(&g, &[&mwpm, &trivial, &mwpm], 0.1, 10_000, 2).unwrap();
        assert_eq!(counts[0], counts[2]);
        assert!(counts[1].failures > counts[0].failures);
        assert_eq!(counts[0], logical_error_rate(&g, &mwpm, 0.1, 10_000, 2).unwrap());
    }
}
