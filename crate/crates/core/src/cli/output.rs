//! Run directories: the manifest goes down first, results follow and are inventoried.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::config::{hex, ExperimentConfig};
use super::CliError;

pub const MANIFEST_SCHEMA: &str = "hrwave/run-manifest/1";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const OUTPUT_ROOT_VAR: &str = "HRWAVE_OUTPUT_ROOT";

#[derive(Clone, Debug, Serialize)]
pub struct OutputEntry {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    pub subcommand: String,
    pub config_hash: String,
    pub code_version: &'static str,
    pub started_unix: u64,
    pub finished_unix: Option<u64>,
    /// `running`, then `ok` or `invariant-violated`.
    pub status: String,
    pub tolerances: BTreeMap<String, f64>,
    pub outputs: Vec<OutputEntry>,
    pub config: ExperimentConfig,
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn io(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub struct RunDir {
    pub path: PathBuf,
    manifest: RunManifest,
}

impl RunDir {
    /// `<root>/<run.output>/<subcommand>-<hash prefix>`, root from the environment or `.`.
    pub fn create(cfg: &ExperimentConfig, subcommand: &str, root: Option<PathBuf>, tolerances: BTreeMap<String, f64>) -> Result<Self, CliError> {
        let root = root.or_else(|| std::env::var_os(OUTPUT_ROOT_VAR).map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("."));
        let hash = cfg.hash();
        let path = root.join(&cfg.run.output).join(format!("{subcommand}-{}", &hash[..12]));
        fs::create_dir_all(&path).map_err(|e| io(&path, e))?;
        let manifest = RunManifest {
            schema: MANIFEST_SCHEMA,
            subcommand: subcommand.into(),
            config_hash: hash,
            code_version: env!("CARGO_PKG_VERSION"),
            started_unix: now(),
            finished_unix: None,
            status: "running".into(),
            tolerances,
            outputs: Vec::new(),
            config: cfg.clone(),
        };
        let dir = Self { path, manifest };
        dir.write_manifest()?;
        Ok(dir)
    }

    fn write_manifest(&self) -> Result<(), CliError> {
        let p = self.path.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        fs::write(&p, text + "\n").map_err(|e| io(&p, e))
    }

    fn put(&mut self, name: &str, bytes: Vec<u8>) -> Result<(), CliError> {
        let p = self.path.join(name);
        fs::write(&p, &bytes).map_err(|e| io(&p, e))?;
        self.manifest.outputs.retain(|o| o.file != name);
        self.manifest.outputs.push(OutputEntry { file: name.into(), bytes: bytes.len(), sha256: hex(&Sha256::digest(&bytes)) });
        Ok(())
    }

    /// JSON result with a `manifest` reference added at the top level.
    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut v = serde_json::to_value(value).expect("result serializes");
        let reference = serde_json::json!({ "file": MANIFEST_FILE, "config_hash": self.manifest.config_hash });
        match &mut v {
            Value::Object(map) => {
                map.insert("manifest".into(), reference);
            }
            other => v = serde_json::json!({ "manifest": reference, "value": other.take() }),
        }
        self.put(name, (serde_json::to_string_pretty(&v).expect("json") + "\n").into_bytes())
    }

    pub fn raw(&mut self, name: &str, bytes: Vec<u8>) -> Result<(), CliError> {
        self.put(name, bytes)
    }

    pub fn finish(mut self, status: &str) -> Result<PathBuf, CliError> {
        self.manifest.status = status.into();
        self.manifest.finished_unix = Some(now());
        self.write_manifest()?;
        Ok(self.path)
    }
}
