//! JSON/CSV persistence: versioned report envelopes, atomic writes and the
//! run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// A report with its schema version prepended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: T,
}

impl<T> Envelope<T> {
    pub fn new(body: T) -> Self {
        Envelope {
            schema_version: SCHEMA_VERSION,
            body,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub subcommand: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub tool_version: String,
    pub started_at: Option<String>,
    pub finished_at: Option<String>,
    pub outputs: Vec<PathBuf>,
}

/// Tracks one invocation: its parameters, its outputs and the clock.
pub struct Run {
    manifest: RunManifest,
    timestamps: bool,
}

impl Run {
    pub fn start(subcommand: &str, params: &impl Serialize, timestamps: bool) -> Result<Self> {
        let parameters = match serde_json::to_value(params)? {
            serde_json::Value::Object(m) => m.into_iter().collect(),
            other => BTreeMap::from([("value".to_string(), other)]),
        };
        Ok(Run {
            manifest: RunManifest {
                schema_version: SCHEMA_VERSION,
                subcommand: subcommand.to_string(),
                parameters,
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                started_at: timestamps.then(now),
                finished_at: None,
                outputs: Vec::new(),
            },
            timestamps,
        })
    }

    pub fn timestamps(&self) -> bool {
        self.timestamps
    }

    pub fn write_json<T: Serialize>(&mut self, path: &Path, report: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(&Envelope::new(report))?;
        text.push('\n');
        write_atomic(path, text.as_bytes())?;
        self.manifest.outputs.push(path.to_path_buf());
        Ok(())
    }

    pub fn write_bytes(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        write_atomic(path, bytes)?;
        self.manifest.outputs.push(path.to_path_buf());
        Ok(())
    }

    /// Writes `<primary>.manifest.json`; call after every other output.
    pub fn finish(mut self, primary: &Path) -> Result<PathBuf> {
        self.manifest.finished_at = self.timestamps.then(now);
        let path = manifest_path(primary);
        let mut text = serde_json::to_string_pretty(&self.manifest)?;
        text.push('\n');
        write_atomic(&path, text.as_bytes())?;
        Ok(path)
    }
}

pub fn manifest_path(primary: &Path) -> PathBuf {
    let mut s = primary.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

/// Writes to a sibling temp file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    {
        let mut f =
            fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}
