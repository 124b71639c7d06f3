//! In-memory artifact set and the single-writer manifest step.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::CliError;

pub const MANIFEST: &str = "manifest.json";
pub const CONFIG_ECHO: &str = "config.toml";
pub const SUMMARY: &str = "summary.txt";

/// Files produced by a run, held in memory until the final write.
#[derive(Debug, Default)]
pub struct Artifacts {
    files: Vec<(String, Vec<u8>)>,
}

impl Artifacts {
    pub fn push(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Numerical(e.to_string()))?;
        bytes.push(b'\n');
        self.push(name, bytes);
        Ok(())
    }

    pub fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<(), CliError> {
        let mut bytes = Vec::new();
        ouselect::io::write_rows(rows, &mut bytes).map_err(|e| CliError::Numerical(e.to_string()))?;
        self.push(name, bytes);
        Ok(())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactEntry {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Versions {
    pub ouselect: String,
    pub ouselect_cli: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub seed: u64,
    pub passed: bool,
    pub versions: Versions,
    pub config: ExperimentConfig,
    pub artifacts: Vec<ArtifactEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes every artifact plus the config echo, then the manifest last.
pub fn commit(out: &Path, config: &ExperimentConfig, passed: bool, mut artifacts: Artifacts) -> Result<Manifest, CliError> {
    fs::create_dir_all(out).map_err(|e| CliError::Config(format!("cannot create {}: {e}", out.display())))?;
    artifacts.push(CONFIG_ECHO, config.to_toml()?.into_bytes());
    let mut entries = Vec::new();
    for (name, bytes) in &artifacts.files {
        let path = out.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
        entries.push(ArtifactEntry {
            file: name.clone(),
            sha256: sha256_hex(bytes),
        });
    }
    let manifest = Manifest {
        command: config.command()?.to_string(),
        seed: config.seed,
        passed,
        versions: Versions {
            ouselect: ouselect::VERSION.to_string(),
            ouselect_cli: env!("CARGO_PKG_VERSION").to_string(),
        },
        config: config.clone(),
        artifacts: entries,
    };
    let mut bytes = serde_json::to_vec_pretty(&manifest).map_err(|e| CliError::Numerical(e.to_string()))?;
    bytes.push(b'\n');
    let path = out.join(MANIFEST);
    fs::write(&path, bytes).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    Ok(manifest)
}

/// Files listed in a manifest whose checksum does not match the disk.
pub fn verify(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let text = fs::read_to_string(dir.join(MANIFEST)).map_err(|e| CliError::Config(e.to_string()))?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(manifest
        .artifacts
        .iter()
        .filter(|a| fs::read(dir.join(&a.file)).map(|b| sha256_hex(&b) != a.sha256).unwrap_or(true))
        .map(|a| dir.join(&a.file))
        .collect())
}
