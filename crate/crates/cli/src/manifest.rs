//! Run manifests: what was run, with which resolved configuration, and the
//! digests of every file it produced.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Version of the manifest and output layout.
pub const SCHEMA_VERSION: u32 = 1;

/// An output file held in memory before it is written.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    /// File name, relative to the output directory.
    pub name: String,
    pub bytes: Vec<u8>,
}

/// One entry of the output list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputEntry {
    /// File name, relative to the manifest's directory.
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Record of one command invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    /// Tool name and version.
    pub version: String,
    pub command: String,
    /// Fully resolved configuration, defaults included.
    pub config: serde_json::Value,
    /// Digests of everything the outputs depend on.
    pub inputs: BTreeMap<String, String>,
    pub outputs: Vec<OutputEntry>,
    pub wall_time_seconds: f64,
}

/// Hex-encoded SHA-256 digest.
pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Where a command writes: a directory and the stem shared by its files.
#[derive(Clone, Debug)]
pub struct Layout {
    dir: PathBuf,
    stem: String,
    primary: String,
}

impl Layout {
    /// Layout derived from the primary output path.
    pub fn new(out: &Path) -> Result<Self, CliError> {
        let primary = out
            .file_name()
            .and_then(|n| n.to_str())
            .ok_or_else(|| CliError::Usage(format!("output path {} has no file name", out.display())))?
            .to_string();
        let stem = out.file_stem().and_then(|n| n.to_str()).unwrap_or(&primary).to_string();
        let dir = out.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self { dir, stem, primary })
    }

    /// File name of the primary output.
    pub fn primary(&self) -> &str {
        &self.primary
    }

    /// File name of a companion output, e.g. `<stem>.fit.json`.
    pub fn companion(&self, suffix: &str) -> String {
        format!("{}.{suffix}", self.stem)
    }

    /// Path of the manifest.
    pub fn manifest_path(&self) -> PathBuf {
        self.dir.join(self.companion("manifest.json"))
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}

impl RunManifest {
    /// Manifest describing `artifacts`.
    pub fn new<C: Serialize>(
        command: &str,
        config: &C,
        artifacts: &[Artifact],
        wall_time_seconds: f64,
    ) -> Result<Self, CliError> {
        let config = serde_json::to_value(config)?;
        let mut inputs = BTreeMap::new();
        inputs.insert("config".to_string(), sha256_hex(serde_json::to_string(&config)?.as_bytes()));
        let outputs = artifacts
            .iter()
            .map(|a| OutputEntry { path: a.name.clone(), sha256: sha256_hex(&a.bytes), bytes: a.bytes.len() })
            .collect();
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            version: concat!("cscx ", env!("CARGO_PKG_VERSION")).to_string(),
            command: command.to_string(),
            config,
            inputs,
            outputs,
            wall_time_seconds,
        })
    }
}

/// Writes every artifact, then the manifest listing them.
pub fn write_all(layout: &Layout, artifacts: &[Artifact], manifest: &RunManifest) -> Result<PathBuf, CliError> {
    if !layout.dir.as_os_str().is_empty() {
        fs::create_dir_all(&layout.dir).map_err(|e| CliError::io(&layout.dir, e))?;
    }
    for a in artifacts {
        let path = layout.path(&a.name);
        fs::write(&path, &a.bytes).map_err(|e| CliError::io(path, e))?;
    }
    let path = layout.manifest_path();
    let mut text = serde_json::to_vec_pretty(manifest)?;
    text.push(b'\n');
    fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

/// Reads the manifest of a previous run.
pub fn read(layout: &Layout) -> Result<RunManifest, CliError> {
    let path = layout.manifest_path();
    let text = fs::read(&path).map_err(|e| CliError::io(&path, e))?;
    Ok(serde_json::from_slice(&text)?)
}

/// Compares a recomputed run against a recorded manifest and the files on disk.
///
/// Returns the number of verified files.
pub fn verify<C>(
    layout: &Layout,
    recorded: &RunManifest,
    command: &str,
    config: &C,
    artifacts: &[Artifact],
) -> Result<usize, CliError>
where
    C: Serialize + for<'de> Deserialize<'de> + PartialEq,
{
    if recorded.command != command {
        return Err(CliError::Verify(format!("manifest records command {:?}, not {command:?}", recorded.command)));
    }
    let round_trip: C = serde_json::from_value(recorded.config.clone())
        .map_err(|e| CliError::Verify(format!("recorded config does not parse: {e}")))?;
    if &round_trip != config {
        return Err(CliError::Verify("recorded config differs from the requested one".into()));
    }
    let recorded_names: Vec<&str> = recorded.outputs.iter().map(|o| o.path.as_str()).collect();
    let fresh_names: Vec<&str> = artifacts.iter().map(|a| a.name.as_str()).collect();
    if recorded_names != fresh_names {
        return Err(CliError::Verify(format!("output lists differ: {recorded_names:?} vs {fresh_names:?}")));
    }
    let mut problems = Vec::new();
    for (entry, fresh) in recorded.outputs.iter().zip(artifacts) {
        if sha256_hex(&fresh.bytes) != entry.sha256 {
            problems.push(format!("{} recomputes differently", entry.path));
        }
        let path = layout.path(&entry.path);
        match fs::read(&path) {
            Ok(on_disk) if sha256_hex(&on_disk) == entry.sha256 => {}
            Ok(_) => problems.push(format!("{} was modified after the run", entry.path)),
            Err(e) => return Err(CliError::io(path, e)),
        }
    }
    if problems.is_empty() {
        Ok(artifacts.len())
    } else {
        Err(CliError::Verify(problems.join("; ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn companions_share_the_stem() {
        let layout = Layout::new(Path::new("out/run.json")).unwrap();
        assert_eq!(layout.primary(), "run.json");
        assert_eq!(layout.companion("fit.json"), "run.fit.json");
        assert_eq!(layout.manifest_path(), Path::new("out/run.manifest.json"));
        assert!(Layout::new(Path::new("..")).is_err());
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
