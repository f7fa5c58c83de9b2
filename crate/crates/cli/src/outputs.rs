//! Output directory handling: JSON/CSV writers and the run manifest, which
//! lists every produced file and is written last as the completion marker.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub subcommand: String,
    pub spec_file: Option<String>,
    pub out_dir: String,
    pub seed: u64,
    pub canonical: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub started: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finished: Option<String>,
    pub outputs: Vec<String>,
}

/// Collects output files so the manifest can list them all.
pub struct OutputSink {
    dir: PathBuf,
    manifest: RunManifest,
}

impl OutputSink {
    pub fn new(
        subcommand: &str,
        spec_file: Option<&Path>,
        out_dir: &Path,
        seed: u64,
        canonical: bool,
    ) -> Result<Self> {
        fs::create_dir_all(out_dir)
            .with_context(|| format!("creating output directory {}", out_dir.display()))?;
        let started = if canonical {
            None
        } else {
            Some(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true))
        };
        Ok(OutputSink {
            dir: out_dir.to_path_buf(),
            manifest: RunManifest {
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                subcommand: subcommand.to_string(),
                spec_file: spec_file.map(|p| p.display().to_string()),
                out_dir: out_dir.display().to_string(),
                seed,
                canonical,
                started,
                finished: None,
                outputs: Vec::new(),
            },
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let path = self.dir.join(name);
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        self.manifest.outputs.push(name.to_string());
        Ok(())
    }

    pub fn write_csv(
        &mut self,
        name: &str,
        field: &conecert::grid::GridFunction,
    ) -> Result<()> {
        let path = self.dir.join(name);
        let mut buf = Vec::new();
        field.write_csv(&mut buf)?;
        fs::write(&path, buf).with_context(|| format!("writing {}", path.display()))?;
        self.manifest.outputs.push(name.to_string());
        Ok(())
    }

    /// Write the manifest last (atomic completion marker).
    pub fn finish(mut self) -> Result<()> {
        self.manifest.outputs.push("manifest.json".to_string());
        self.manifest.outputs.sort();
        if !self.manifest.canonical {
            self.manifest.finished =
                Some(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true));
        }
        let path = self.dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&self.manifest)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}
