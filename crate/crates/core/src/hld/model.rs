use crate::code::CodeGeometry;
use crate::error::{Error, Result};
use crate::matching::Underlying;
use crate::mlp::{Network, TrainConfig};
use crate::symmetry::SymmetryMode;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// A trained classifier together with the decoding setup it was trained for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub l: usize,
    pub underlying: Underlying,
    pub symmetry: SymmetryMode,
    pub p_train: f64,
    pub dataset_seed: u64,
    pub train_config: TrainConfig,
    pub network: Network<f32>,
}

impl ModelFile {
    pub fn validate(&self) -> Result<()> {
        if self.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported model version {}", self.format_version)));
        }
        let g = CodeGeometry::new(self.l).map_err(|e| Error::Format(e.to_string()))?;
        if self.network.input_len() != g.syndrome_len() {
            return Err(Error::ConfigMismatch(format!(
                "network expects {} inputs but L = {} syndromes have {}",
                self.network.input_len(),
                self.l,
                g.syndrome_len()
            )));
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer(file, self)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::io::BufReader::new(std::fs::File::open(path)?);
        let model: ModelFile = serde_json::from_reader(file).map_err(|e| {
            if e.is_io() {
                Error::Json(e)
            } else {
                Error::Format(format!("model file: {e}"))
            }
        })?;
        model.validate()?;
        Ok(model)
    }
}
