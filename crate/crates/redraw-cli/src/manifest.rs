//! Run manifests: every subcommand records its resolved configuration,
//! seed and outputs next to the files it writes, so any run can be
//! reproduced bit-exactly from the manifest alone.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    /// All defaults materialized; rerunning with this config reproduces
    /// the outputs bit-exactly.
    pub resolved_config: serde_json::Value,
    pub seed: Option<u64>,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub wall_clock_seconds: f64,
    pub created_unix: u64,
}

impl RunManifest {
    pub fn new(subcommand: &str, resolved_config: serde_json::Value, seed: Option<u64>) -> Self {
        RunManifest {
            tool: "redraw",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            resolved_config,
            seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
            wall_clock_seconds: 0.0,
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    pub fn input(&mut self, path: &Path) {
        self.inputs.push(path.to_path_buf());
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    /// Writes `manifest.json` atomically (temp file + rename).
    pub fn write(mut self, dir: &Path, elapsed_seconds: f64) -> Result<()> {
        self.wall_clock_seconds = elapsed_seconds;
        let path = dir.join("manifest.json");
        let tmp = dir.join("manifest.json.tmp");
        let text = serde_json::to_string_pretty(&self)?;
        fs::write(&tmp, text + "\n")
            .with_context(|| format!("writing {}", tmp.display()))?;
        fs::rename(&tmp, &path)
            .with_context(|| format!("renaming manifest into {}", path.display()))?;
        Ok(())
    }
}
