use std::fs;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::Serialize;

use crate::run::CliError;

/// Record of one invocation and every file it wrote.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub command: Vec<String>,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<String>,
    pub passed: bool,
    pub summary: Vec<String>,
}

/// Collects output files under one directory with a common stem.
pub struct Outputs {
    dir: PathBuf,
    stem: String,
    written: Vec<String>,
    started: DateTime<Utc>,
}

impl Outputs {
    pub fn new(dir: &Path, stem: &str) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Outputs { dir: dir.to_path_buf(), stem: stem.into(), written: vec![], started: Utc::now() })
    }

    pub fn write(&mut self, ext: &str, content: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(format!("{}.{ext}", self.stem));
        fs::write(&path, content)?;
        self.written.push(path.display().to_string());
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, value: &T) -> Result<PathBuf, CliError> {
        let text = serde_json::to_string_pretty(value)?;
        self.write("json", &text)
    }

    pub fn finish<P: Serialize>(
        self,
        subcommand: &str,
        command: &[String],
        params: &P,
        seed: Option<u64>,
        passed: bool,
        summary: Vec<String>,
    ) -> Result<PathBuf, CliError> {
        let manifest = RunManifest {
            subcommand: subcommand.into(),
            command: command.to_vec(),
            params: serde_json::to_value(params)?,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            started: self.started.to_rfc3339(),
            finished: Utc::now().to_rfc3339(),
            outputs: self.written,
            passed,
            summary,
        };
        let path = self.dir.join(format!("{}.manifest.json", self.stem));
        fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
        Ok(path)
    }
}
