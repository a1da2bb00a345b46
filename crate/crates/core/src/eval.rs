//! Relative error rates with confidence intervals, noise sweeps, and
//! timing benchmarks for canonicalization and the underlying decoders.

use crate::code::{CodeGeometry, Syndrome};
use crate::error::{Error, Result};
use crate::hld::{shared_error_counts, Decoder};
use crate::matching::{mwpm_decode, trivial_decode};
use crate::noise::{rng_stream, sample_error};
use crate::symmetry::{align, center};
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::Instant;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.96;

/// Ratio of two binomial proportions with a log-normal interval. Fields are
/// `None` where the estimate is undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEstimate {
    pub ratio: Option<f64>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

/// `(k1/n1)/(k2/n2)` with bounds `exp(ln ratio ± z·se)`, where
/// `se² = (1−p̂₁)/(n₁p̂₁) + (1−p̂₂)/(n₂p̂₂)`.
pub fn log_ratio_ci(k1: u64, n1: u64, k2: u64, n2: u64, z: f64) -> Result<RatioEstimate> {
    if n1 == 0 || n2 == 0 || k1 > n1 || k2 > n2 {
        return Err(Error::InvalidArgument(format!("invalid counts {k1}/{n1}, {k2}/{n2}")));
    }
    let p1 = k1 as f64 / n1 as f64;
    let p2 = k2 as f64 / n2 as f64;
    if k2 == 0 {
        return Ok(RatioEstimate { ratio: None, lo: None, hi: None });
    }
    let ratio = p1 / p2;
    if k1 == 0 {
        return Ok(RatioEstimate { ratio: Some(ratio), lo: None, hi: None });
    }
    let se = ((1.0 - p1) / (n1 as f64 * p1) + (1.0 - p2) / (n2 as f64 * p2)).sqrt();
    Ok(RatioEstimate {
        ratio: Some(ratio),
        lo: Some((ratio.ln() - z * se).exp()),
        hi: Some((ratio.ln() + z * se).exp()),
    })
}

/// Fraction of `reps` simulated pairs of identical Bernoulli(p) streams of
/// length `n` whose 95% interval contains 1.
pub fn ci_coverage(p: f64, n: u64, reps: usize, seed: u64) -> Result<f64> {
    let binomial = Binomial::new(n, p).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = rng_stream(seed, 0);
    let mut hits = 0;
    for _ in 0..reps {
        let (k1, k2) = (binomial.sample(&mut rng), binomial.sample(&mut rng));
        let est = log_ratio_ci(k1, n, k2, n, Z_95)?;
        if let (Some(lo), Some(hi)) = (est.lo, est.hi) {
            if lo <= 1.0 && 1.0 <= hi {
                hits += 1;
            }
        }
    }
    Ok(hits as f64 / reps as f64)
}

/// One row of a sweep: a decoder variant against the reference at one `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub variant: String,
    #[serde(rename = "L")]
    pub l: usize,
    pub p: f64,
    pub n: u64,
    pub k: u64,
    pub rate: f64,
    pub ref_variant: String,
    pub ref_k: u64,
    pub ref_n: u64,
    pub ratio: Option<f64>,
    pub ci_lo: Option<f64>,
    pub ci_hi: Option<f64>,
    pub seed: u64,
}

pub fn write_records<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<ExperimentRecord>> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// `0.01, 0.02, …, 0.18`.
pub fn default_p_list() -> Vec<f64> {
    (1..=18).map(|i| i as f64 / 100.0).collect()
}

/// Evaluates every variant and the reference on the same errors at each
/// noise parameter. Variants named like the reference reuse its counts.
pub fn sweep(
    g: &CodeGeometry,
    variants: &[&dyn Decoder],
    reference: &dyn Decoder,
    p_list: &[f64],
    n: usize,
    seed: u64,
) -> Result<Vec<ExperimentRecord>> {
    if p_list.is_empty() {
        return Err(Error::InvalidArgument("empty noise parameter list".into()));
    }
    let ref_name = reference.name();
    let mut decoders: Vec<&dyn Decoder> = vec![reference];
    let mut slot = Vec::with_capacity(variants.len());
    for v in variants {
        if v.name() == ref_name {
            slot.push(0);
        } else {
            slot.push(decoders.len());
            decoders.push(*v);
        }
    }
    let mut records = Vec::with_capacity(p_list.len() * variants.len());
    for &p in p_list {
        let counts = shared_error_counts(g, &decoders, p, n, seed)?;
        let r = counts[0];
        for (v, &i) in variants.iter().zip(&slot) {
            let c = counts[i];
            let est = log_ratio_ci(c.failures, c.trials, r.failures, r.trials, Z_95)?;
            records.push(ExperimentRecord {
                variant: v.name(),
                l: g.l(),
                p,
                n: c.trials,
                k: c.failures,
                rate: c.rate(),
                ref_variant: ref_name.clone(),
                ref_k: r.failures,
                ref_n: r.trials,
                ratio: est.ratio,
                ci_lo: est.lo,
                ci_hi: est.hi,
                seed,
            });
        }
    }
    Ok(records)
}

/// Failure probability of two unencoded qubits.
pub fn unencoded_rate(p: f64) -> f64 {
    1.0 - (1.0 - p) * (1.0 - p)
}

/// Where a decoder's logical error rate meets [`unencoded_rate`], with the
/// grid points bracketing the crossing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdEstimate {
    pub p: f64,
    pub below: f64,
    pub above: f64,
}

/// First crossing of `(p, rate)` points with the unencoded rate, linearly
/// interpolated. Points with `p ≤ 0` are ignored.
pub fn pseudo_threshold(points: &[(f64, f64)]) -> Option<ThresholdEstimate> {
    let mut pts: Vec<(f64, f64)> = points.iter().copied().filter(|&(p, _)| p > 0.0).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let gap = |&(p, rate): &(f64, f64)| rate - unencoded_rate(p);
    for (i, pt) in pts.iter().enumerate() {
        let d0 = gap(pt);
        if d0 == 0.0 {
            return Some(ThresholdEstimate { p: pt.0, below: pt.0, above: pt.0 });
        }
        if let Some(next) = pts.get(i + 1) {
            let d1 = gap(next);
            if d1 != 0.0 && (d0 < 0.0) != (d1 < 0.0) {
                let p = pt.0 + (next.0 - pt.0) * d0 / (d0 - d1);
                return Some(ThresholdEstimate { p, below: pt.0, above: next.0 });
            }
        }
    }
    None
}

/// Operation timed by [`bench`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchOp {
    Center,
    Align,
    Trivial,
    Mwpm,
}

impl BenchOp {
    pub const ALL: [BenchOp; 4] = [BenchOp::Center, BenchOp::Align, BenchOp::Trivial, BenchOp::Mwpm];

    pub fn as_str(self) -> &'static str {
        match self {
            BenchOp::Center => "center",
            BenchOp::Align => "align",
            BenchOp::Trivial => "trivial",
            BenchOp::Mwpm => "mwpm",
        }
    }

    fn run(self, g: &CodeGeometry, s: &Syndrome) -> Result<()> {
        match self {
            BenchOp::Center => center(g, s).map(drop),
            BenchOp::Align => align(g, s).map(drop),
            BenchOp::Trivial => trivial_decode(g, s).map(drop),
            BenchOp::Mwpm => mwpm_decode(g, s).map(drop),
        }
    }
}

impl fmt::Display for BenchOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BenchOp::ALL
            .into_iter()
            .find(|op| op.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown benchmark op '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub op: BenchOp,
    #[serde(rename = "L")]
    pub l: usize,
    pub p: f64,
    pub n_samples: usize,
    pub mean_ns: f64,
    pub stddev_ns: f64,
}

/// Times `op` on `n_samples` syndromes of random errors at noise `p` for
/// every lattice size in `l_list`.
pub fn bench(op: BenchOp, l_list: &[usize], p: f64, n_samples: usize, seed: u64) -> Result<Vec<BenchRow>> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let mut rows = Vec::with_capacity(l_list.len());
    for &l in l_list {
        let g = CodeGeometry::new(l)?;
        let mut rng = rng_stream(seed, l as u64);
        let syndromes = (0..n_samples)
            .map(|_| g.syndrome_of(&sample_error(&g, p, &mut rng)))
            .collect::<Result<Vec<_>>>()?;
        let mut times = Vec::with_capacity(n_samples);
        for s in &syndromes {
            let start = Instant::now();
            op.run(&g, s)?;
            times.push(start.elapsed().as_nanos() as f64);
        }
        let mean = times.iter().sum::<f64>() / n_samples as f64;
        let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / n_samples as f64;
        rows.push(BenchRow { op, l, p, n_samples, mean_ns: mean, stddev_ns: var.sqrt() });
    }
    Ok(rows)
}

/// Alignment timing table.
pub fn bench_centering(l_list: &[usize], p: f64, n_samples: usize, seed: u64) -> Result<Vec<BenchRow>> {
    if !l_list.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument("lattice sizes must be strictly ascending".into()));
    }
    bench(BenchOp::Align, l_list, p, n_samples, seed)
}

/// Least-squares slope of `ln(mean_ns)` against `ln(L)`; needs two sizes.
pub fn loglog_slope(rows: &[BenchRow]) -> Option<f64> {
    if rows.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| ((r.l as f64).ln(), r.mean_ns.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn write_bench<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
