//! Toric code workbench with a symmetry-aware high-level neural decoder.
//!
//! The crate covers the whole pipeline: lattice geometry and Pauli algebra
//! ([`code`]), depolarizing noise ([`noise`]), matching decoders
//! ([`matching`]), translation and anti-transposition canonicalization
//! ([`symmetry`]), a small feed-forward classifier ([`mlp`]), the high-level
//! decoder built from them ([`hld`]) and error-rate statistics ([`eval`]).
//! [`oracle`] and [`witness`] hold brute-force checks and small
//! counterexample searches.

pub mod bits;
pub mod code;
pub mod error;
pub mod eval;
pub mod hld;
pub mod matching;
pub mod mlp;
pub mod noise;
pub mod oracle;
pub mod symmetry;
pub mod witness;

pub use bits::BitVec;
pub use code::{CodeGeometry, Edge, Logical, LogicalLabel, Orientation, PauliChain, Syndrome};
pub use error::{Error, Result};
pub use eval::{ExperimentRecord, RatioEstimate};
pub use hld::{Dataset, Decoder, ErrorCount, HighLevelDecoder, HldConfig, ModelFile, TrainingSample, WrappedDecoder};
pub use matching::{mwpm_decode, trivial_decode, Underlying};
pub use mlp::{Network, TrainConfig, TrainingCurves};
pub use noise::{sample_error, NoiseParams};
pub use symmetry::{SymmetryMode, Transform};
