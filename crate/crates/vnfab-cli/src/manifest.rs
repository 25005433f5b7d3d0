//! Run manifest and output writers. Every file a subcommand writes starts
//! with the manifest as `#` comment lines, followed by a deterministic body.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use vnfab::config::{load_config, Config};

use crate::CliError;

/// A resolved configuration and where it came from.
pub struct LoadedConfig {
    pub config: Config,
    pub path: Option<PathBuf>,
    /// SHA-256 of the canonical JSON rendering.
    pub hash: String,
}

impl LoadedConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let config = match path {
            Some(p) => load_config(p)?,
            None => Config::default(),
        };
        let hash = hex::encode(Sha256::digest(config.to_json().as_bytes()));
        Ok(Self {
            config,
            path: path.map(Path::to_path_buf),
            hash,
        })
    }
}

pub struct RunManifest {
    pub subcommand: String,
    pub config_path: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub params: Vec<(String, String)>,
    pub tool_version: &'static str,
    pub config_hash: String,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: &LoadedConfig, out_dir: &Path) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            config_path: config.path.clone(),
            out_dir: out_dir.to_path_buf(),
            params: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION"),
            config_hash: config.hash.clone(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn header(&self) -> String {
        let config = self.config_path.as_ref().map_or_else(
            || "<built-in default>".to_string(),
            |p| p.display().to_string(),
        );
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!(
            "# tool: vnfab {}\n# subcommand: {}\n# config: {config}\n# config_sha256: {}\n# out: {}\n# params: {}\n",
            self.tool_version,
            self.subcommand,
            self.config_hash,
            self.out_dir.display(),
            params.join(" ")
        )
    }

    fn write(&self, name: &str, body: &str) -> Result<PathBuf, CliError> {
        fs::create_dir_all(&self.out_dir).map_err(|e| CliError::io(&self.out_dir, e))?;
        let path = self.out_dir.join(name);
        fs::write(&path, format!("{}{body}", self.header())).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    /// Writes `name` as CSV. Column names carry their unit in brackets.
    pub fn write_csv(
        &self,
        name: &str,
        columns: &[&str],
        rows: &[Vec<String>],
    ) -> Result<PathBuf, CliError> {
        self.write(name, &csv_body(columns, rows)?)
    }

    pub fn write_text(&self, name: &str, body: &str) -> Result<PathBuf, CliError> {
        self.write(name, body)
    }
}

pub fn csv_body(columns: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Analysis(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
