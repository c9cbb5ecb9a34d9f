//! Provenance attached to every output artifact.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMeta {
    pub tool: &'static str,
    pub version: &'static str,
    /// SHA-256 of the canonical JSON form of the run configuration.
    pub config_hash: String,
    pub seed: Option<u64>,
    pub runtime_seconds: f64,
}

impl RunMeta {
    pub fn new(config: &impl Serialize, seed: Option<u64>, runtime_seconds: f64) -> Self {
        Self { tool: "wehrl", version: env!("CARGO_PKG_VERSION"), config_hash: config_hash(config), seed, runtime_seconds }
    }
}

pub fn config_hash(config: &impl Serialize) -> String {
    let bytes = serde_json::to_vec(config).expect("configuration serializes");
    format!("{:x}", Sha256::digest(&bytes))
}

/// `<out>.meta.json`, which carries the runtime of CSV outputs.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}
