//! Run manifests written next to every output table.
//!
//! A manifest carries the tool version, the fully resolved configuration,
//! the seed and RNG pipeline, start and end timestamps and a host
//! descriptor. Rerunning the recorded configuration reproduces the table
//! exactly except for timing columns.

use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::Serialize;

use crate::channel::RNG_ALGORITHM;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct HostInfo {
    pub hostname: String,
    pub os: &'static str,
    pub arch: &'static str,
    pub cpus: usize,
}

impl HostInfo {
    pub fn current() -> Self {
        let hostname = std::fs::read_to_string("/proc/sys/kernel/hostname")
            .ok()
            .or_else(|| std::env::var("HOSTNAME").ok())
            .map(|s| s.trim().to_string())
            .unwrap_or_else(|| "unknown".into());
        HostInfo {
            hostname,
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
            cpus: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub rng: &'static str,
    pub started: DateTime<Utc>,
    pub finished: Option<DateTime<Utc>>,
    pub host: HostInfo,
    /// Per-row extras that do not fit the fixed CSV columns.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<serde_json::Value>,
}

impl RunManifest {
    /// Starts the clock for `command` run with `config`.
    pub fn start<C: Serialize>(command: &str, config: &C, seed: Option<u64>) -> Result<Self> {
        let config = serde_json::to_value(config)
            .map_err(|e| Error::InvalidArgument(format!("config does not serialize: {e}")))?;
        Ok(RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config,
            seed,
            rng: RNG_ALGORITHM,
            started: Utc::now(),
            finished: None,
            host: HostInfo::current(),
            rows: Vec::new(),
        })
    }

    pub fn finish(&mut self) {
        self.finished = Some(Utc::now());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    /// `results.csv` -> `results.manifest.json`.
    pub fn path_for(csv: &Path) -> PathBuf {
        csv.with_extension("manifest.json")
    }

    pub fn write_for(&self, csv: &Path) -> Result<PathBuf> {
        let path = Self::path_for(csv);
        std::fs::write(&path, self.to_json())
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        Ok(path)
    }
}
