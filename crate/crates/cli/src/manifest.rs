use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{io_err, CliError};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    /// SHA-256 of the resolved scenario config.
    pub config_digest: String,
    pub base_seed: u64,
    pub timestamp: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(config_text: &str, base_seed: u64, mut outputs: Vec<String>) -> Self {
        outputs.sort();
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_digest: digest(config_text),
            base_seed,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            outputs,
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, text + "\n").map_err(io_err(path))
    }
}

pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
