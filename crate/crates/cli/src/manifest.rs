use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};
use srgg_core::io::{write_json, IoError};

#[derive(Debug, Serialize)]
pub struct InputHash {
    pub path: PathBuf,
    pub sha256: String,
}

/// Run provenance; the only output that carries timestamps.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    /// Parsed arguments, including seeds.
    pub config: serde_json::Value,
    pub version: String,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub inputs: Vec<InputHash>,
    pub outputs: Vec<PathBuf>,
}

pub fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

pub fn sha256_file(path: &Path) -> Result<String, IoError> {
    let bytes = std::fs::read(path).map_err(|source| IoError::Io { path: path.to_path_buf(), source })?;
    Ok(format!("{:x}", Sha256::digest(&bytes)))
}

impl Manifest {
    pub fn new<C: Serialize>(command: &str, config: &C, started_unix: u64) -> Self {
        Self {
            command: command.to_string(),
            config: serde_json::to_value(config).unwrap_or(serde_json::Value::Null),
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix,
            finished_unix: started_unix,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<(), IoError> {
        let sha256 = sha256_file(path)?;
        self.inputs.push(InputHash { path: path.to_path_buf(), sha256 });
        Ok(())
    }

    pub fn write(mut self, dir: &Path) -> Result<PathBuf, IoError> {
        self.finished_unix = unix_now();
        let path = dir.join("manifest.json");
        write_json(&path, &self)?;
        Ok(path)
    }
}
