//! Output-directory handling: provenance headers on every file, a
//! versioned JSON manifest per run, and cleanup of partial writes when a
//! command fails midway.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

/// Collects files written by one command so they can be removed if the
/// command errors after partial output.
pub struct OutputDir {
    dir: PathBuf,
    written: Vec<PathBuf>,
    pub seed: u64,
    pub config_hash: u64,
}

impl OutputDir {
    pub fn create(dir: &Path, seed: u64, config_hash: u64) -> Result<Self> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
            seed,
            config_hash,
        })
    }

    /// Provenance comment lines placed before every CSV header.
    pub fn provenance(&self, extra: &[(&str, String)]) -> String {
        let mut out = format!(
            "# tool=cobacs version={}\n# seed={} config_hash={:016x}\n",
            env!("CARGO_PKG_VERSION"),
            self.seed,
            self.config_hash
        );
        for (key, value) in extra {
            out.push_str(&format!("# {key}={value}\n"));
        }
        out
    }

    pub fn write_file(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents)
            .with_context(|| format!("writing {}", path.display()))?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn write_manifest(&mut self, mut manifest: serde_json::Value) -> Result<PathBuf> {
        let outputs: Vec<String> = self
            .written
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect();
        if let Some(map) = manifest.as_object_mut() {
            map.insert(
                "schema_version".into(),
                serde_json::json!(MANIFEST_SCHEMA_VERSION),
            );
            map.insert(
                "tool_version".into(),
                serde_json::json!(env!("CARGO_PKG_VERSION")),
            );
            map.insert("seed".into(), serde_json::json!(self.seed));
            map.insert(
                "config_hash".into(),
                serde_json::json!(format!("{:016x}", self.config_hash)),
            );
            map.insert("outputs".into(), serde_json::json!(outputs));
        }
        let text = format!("{}\n", serde_json::to_string_pretty(&manifest)?);
        self.write_file("manifest.json", &text)
    }

    /// Remove everything written so far (called on command failure).
    pub fn cleanup(&self) {
        for path in &self.written {
            let _ = std::fs::remove_file(path);
        }
    }

    pub fn files(&self) -> &[PathBuf] {
        &self.written
    }
}

/// Fixed-precision float for deterministic CSV bytes.
pub fn fmt(value: f64) -> String {
    if value.is_nan() {
        String::new()
    } else {
        format!("{value:.6}")
    }
}

/// One-decimal percent, the table formatting used in reports.
pub fn fmt_pct(value: f64) -> String {
    if value.is_nan() {
        String::new()
    } else {
        format!("{value:.1}")
    }
}
