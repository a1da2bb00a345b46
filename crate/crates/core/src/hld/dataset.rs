//! Binary dataset file.
//!
//! Little-endian layout:
//!
//! | offset | size | field |
//! |-------:|-----:|-------|
//! | 0 | 8 | magic `TORICHLD` |
//! | 8 | 2 | format version (1) |
//! | 10 | 2 | L |
//! | 12 | 8 | p_train (f64) |
//! | 20 | 1 | underlying decoder (0 mwpm, 1 trivial) |
//! | 21 | 1 | symmetry mode (0 none, 1 center, 2 align) |
//! | 22 | 8 | seed |
//! | 30 | 8 | record count |
//!
//! Each record is `ceil(2L²/8)` bytes of syndrome bits, least significant
//! bit first, followed by one label byte.

use super::TrainingSample;
use crate::bits::BitVec;
use crate::code::{CodeGeometry, LogicalLabel, Syndrome};
use crate::error::{Error, Result};
use crate::matching::Underlying;
use crate::mlp::LabeledData;
use crate::symmetry::SymmetryMode;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

pub const MAGIC: &[u8; 8] = b"TORICHLD";
pub const FORMAT_VERSION: u16 = 1;
pub const HEADER_LEN: usize = 38;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetHeader {
    pub l: usize,
    pub p_train: f64,
    pub underlying: Underlying,
    pub symmetry: SymmetryMode,
    pub seed: u64,
    pub count: u64,
}

impl DatasetHeader {
    pub fn syndrome_len(&self) -> usize {
        2 * self.l * self.l
    }

    pub fn record_len(&self) -> usize {
        self.syndrome_len().div_ceil(8) + 1
    }

    fn to_bytes(self) -> Result<[u8; HEADER_LEN]> {
        let l = u16::try_from(self.l).map_err(|_| Error::InvalidArgument(format!("L = {} too large", self.l)))?;
        let mut out = [0u8; HEADER_LEN];
        out[0..8].copy_from_slice(MAGIC);
        out[8..10].copy_from_slice(&FORMAT_VERSION.to_le_bytes());
        out[10..12].copy_from_slice(&l.to_le_bytes());
        out[12..20].copy_from_slice(&self.p_train.to_le_bytes());
        out[20] = self.underlying.code();
        out[21] = self.symmetry.code();
        out[22..30].copy_from_slice(&self.seed.to_le_bytes());
        out[30..38].copy_from_slice(&self.count.to_le_bytes());
        Ok(out)
    }

    fn from_bytes(b: &[u8; HEADER_LEN]) -> Result<Self> {
        if &b[0..8] != MAGIC {
            return Err(Error::Format("not a dataset file (bad magic)".into()));
        }
        let version = u16::from_le_bytes([b[8], b[9]]);
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported dataset version {version}")));
        }
        let l = u16::from_le_bytes([b[10], b[11]]) as usize;
        if l < 2 {
            return Err(Error::Format(format!("invalid lattice size {l}")));
        }
        let p_train = f64::from_le_bytes(b[12..20].try_into().unwrap());
        if !(0.0..=1.0).contains(&p_train) {
            return Err(Error::Format(format!("invalid noise parameter {p_train}")));
        }
        Ok(DatasetHeader {
            l,
            p_train,
            underlying: Underlying::from_code(b[20])?,
            symmetry: SymmetryMode::from_code(b[21])?,
            seed: u64::from_le_bytes(b[22..30].try_into().unwrap()),
            count: u64::from_le_bytes(b[30..38].try_into().unwrap()),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub header: DatasetHeader,
    pub samples: Vec<TrainingSample>,
}

impl Dataset {
    pub fn write<W: Write>(&self, out: W) -> Result<()> {
        let header = DatasetHeader { count: self.samples.len() as u64, ..self.header };
        let mut w = BufWriter::new(out);
        w.write_all(&header.to_bytes()?)?;
        let n = header.syndrome_len();
        for sample in &self.samples {
            if sample.input.len() != n {
                return Err(Error::LengthMismatch { expected: n, found: sample.input.len() });
            }
            w.write_all(&sample.input.bits().to_bytes())?;
            w.write_all(&[sample.label.value()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read<R: Read>(input: R) -> Result<Self> {
        let mut r = BufReader::new(input);
        let mut head = [0u8; HEADER_LEN];
        r.read_exact(&mut head).map_err(|e| truncated(e, "header"))?;
        let header = DatasetHeader::from_bytes(&head)?;
        let n = header.syndrome_len();
        let mut record = vec![0u8; header.record_len()];
        let mut samples = Vec::with_capacity(header.count.min(1 << 24) as usize);
        for _ in 0..header.count {
            r.read_exact(&mut record).map_err(|e| truncated(e, "record"))?;
            let (bits, label) = record.split_at(record.len() - 1);
            let label = LogicalLabel::new(label[0]).map_err(|_| Error::Format(format!("label {} out of range", label[0])))?;
            samples.push(TrainingSample { input: Syndrome::from_bits(BitVec::from_bytes(n, bits)), label });
        }
        if r.read(&mut [0u8; 1])? != 0 {
            return Err(Error::Format("trailing bytes after the last record".into()));
        }
        Ok(Dataset { header: DatasetHeader { count: samples.len() as u64, ..header }, samples })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write(std::fs::File::create(path)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::read(std::fs::File::open(path)?)
    }

    pub fn geometry(&self) -> Result<CodeGeometry> {
        CodeGeometry::new(self.header.l)
    }

    pub fn to_labeled_data(&self) -> LabeledData {
        let mut data = LabeledData::with_capacity(self.header.syndrome_len(), self.samples.len());
        for s in &self.samples {
            data.push(s.input.bits().iter(), s.label.value()).expect("validated on construction");
        }
        data
    }

    /// Number of samples per label value.
    pub fn label_histogram(&self) -> [u64; LogicalLabel::COUNT] {
        let mut h = [0u64; LogicalLabel::COUNT];
        for s in &self.samples {
            h[s.label.value() as usize] += 1;
        }
        h
    }
}

fn truncated(e: std::io::Error, what: &str) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::Format(format!("dataset truncated inside a {what}"))
    } else {
        Error::Io(e)
    }
}
