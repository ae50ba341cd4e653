use serde::Serialize;
use serde_json::Value;
use std::path::{Path, PathBuf};

/// Version string baked in at build time: the package version, plus the
/// `git describe` of the checkout when one was available.
pub const VERSION: &str = env!("KFP_VERSION");

/// Record of one invocation. Identical command, config and seed reproduce
/// identical numerical outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Value,
    pub seed: u64,
    pub version: String,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn start(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            config: Value::Null,
            seed: 0,
            version: VERSION.to_owned(),
            started: now(),
            finished: String::new(),
            outputs: Vec::new(),
        }
    }

    /// Stamps the finish time and writes `manifest.json` into `dir`.
    pub fn finish(mut self, dir: &Path) -> anyhow::Result<PathBuf> {
        self.finished = now();
        let path = dir.join("manifest.json");
        std::fs::write(&path, serde_json::to_string_pretty(&self)? + "\n")?;
        Ok(path)
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}
