//! Run manifests written next to search output.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::Failure;

#[derive(Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub parameters: Value,
    /// No command draws random numbers today; kept so the format is stable.
    pub seed: Option<u64>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub result: Value,
    /// Only present when asked for, so repeated runs give identical files.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_secs: Option<f64>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `out.code` -> `out.code.manifest.json`
pub fn path_for(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

impl Manifest {
    pub fn new(command: &'static str, parameters: Value, inputs: &[&Path], result: Value) -> Result<Self, Failure> {
        let inputs = inputs
            .iter()
            .map(|p| {
                let bytes = std::fs::read(p).map_err(|e| Failure {
                    code: crate::INPUT,
                    message: format!("{}: {e}", p.display()),
                })?;
                Ok(FileDigest {
                    path: p.display().to_string(),
                    sha256: sha256_hex(&bytes),
                })
            })
            .collect::<Result<_, Failure>>()?;
        Ok(Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            parameters,
            seed: None,
            inputs,
            outputs: Vec::new(),
            result,
            wall_time_secs: None,
        })
    }

    pub fn with_output(mut self, path: &Path, contents: &str) -> Self {
        self.outputs.push(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(contents.as_bytes()),
        });
        self
    }

    pub fn with_time(mut self, elapsed: Option<Duration>) -> Self {
        self.wall_time_secs = elapsed.map(|d| d.as_secs_f64());
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}
