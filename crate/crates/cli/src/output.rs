//! Run manifests and output files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Record of one run. Everything except `wall_time_secs` is reproducible.
#[derive(Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub tool_version: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub wall_time_secs: f64,
}

/// Collects inputs and outputs of a run, then writes `manifest.json`.
pub struct Run {
    started: Instant,
    manifest: RunManifest,
    out_dir: Option<PathBuf>,
}

impl Run {
    pub fn new(subcommand: &str, out_dir: Option<&Path>) -> anyhow::Result<Self> {
        if let Some(d) = out_dir {
            fs::create_dir_all(d)?;
        }
        Ok(Self {
            started: Instant::now(),
            manifest: RunManifest {
                subcommand: subcommand.into(),
                tool_version: env!("CARGO_PKG_VERSION").into(),
                parameters: BTreeMap::new(),
                inputs: Vec::new(),
                outputs: Vec::new(),
                wall_time_secs: 0.0,
            },
            out_dir: out_dir.map(Path::to_path_buf),
        })
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("serializable parameter");
        self.manifest.parameters.insert(key.into(), v);
    }

    /// Reads an input file and records its digest.
    pub fn read_input(&mut self, path: &Path) -> anyhow::Result<String> {
        let text = fs::read_to_string(path)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
        self.manifest.inputs.push(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(text.as_bytes()),
        });
        Ok(text)
    }

    pub fn elapsed_secs(&self) -> f64 {
        self.started.elapsed().as_secs_f64()
    }

    /// Writes `bytes` to `name` under the output directory, if there is one.
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> anyhow::Result<()> {
        let Some(dir) = &self.out_dir else {
            return Ok(());
        };
        let path = dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, bytes)?;
        self.manifest.outputs.push(FileDigest {
            path: name.into(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> anyhow::Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn finish(mut self) -> anyhow::Result<()> {
        let Some(dir) = self.out_dir.clone() else {
            return Ok(());
        };
        self.manifest.wall_time_secs = (self.elapsed_secs() * 1000.0).round() / 1000.0;
        let mut text = serde_json::to_string_pretty(&self.manifest)?;
        text.push('\n');
        fs::write(dir.join("manifest.json"), text)?;
        Ok(())
    }
}

/// Parses `a..b`, `a` or `a,b,c`.
pub fn parse_range(s: &str) -> anyhow::Result<Vec<u64>> {
    let bad = || designforge::Error::Precondition(format!("malformed range {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad().into());
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad().into()))
        .collect()
}
