//! What a run leaves behind next to its outputs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{io_err, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub summary: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub config_hash: String,
    pub kind: String,
    pub seed: u64,
    pub workers: usize,
    pub wall_clock_seconds: f64,
    /// File names relative to the run directory.
    pub outputs: Vec<String>,
    pub checks: Vec<Check>,
    pub passed: bool,
    /// Some output was cut short by a budget.
    pub partial: bool,
}

impl RunManifest {
    pub fn read(dir: &Path) -> Result<RunManifest> {
        let path = dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path).map_err(io_err(&path))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let path = dir.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(self)? + "\n";
        std::fs::write(&path, text).map_err(io_err(&path))
    }
}
