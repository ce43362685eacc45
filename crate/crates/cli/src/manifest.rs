//! Run manifests: parameter echo, output digests, replay support.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

/// Reproducibility class of a command's output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ManifestKind {
    /// Bit-exact under replay.
    Mc,
    /// Reproducible within the command's stated tolerance.
    Opt,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub args: serde_json::Value,
    pub seed: u64,
    pub kind: ManifestKind,
    pub started_at: String,
    pub finished_at: String,
    pub outputs: Vec<OutputRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hex_string(&hasher.finalize())
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Write the primary payload and its manifest; returns the manifest path.
pub fn write_with_manifest(
    out_path: &Path,
    payload: &str,
    command: &str,
    args: serde_json::Value,
    seed: u64,
    kind: ManifestKind,
    started_at: String,
) -> std::io::Result<PathBuf> {
    std::fs::write(out_path, payload)?;
    let manifest = RunManifest {
        tool: "ftcap".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        args,
        seed,
        kind,
        started_at,
        finished_at: chrono::Utc::now().to_rfc3339(),
        outputs: vec![OutputRecord {
            path: out_path.to_string_lossy().into_owned(),
            sha256: sha256_hex(payload.as_bytes()),
        }],
    };
    let mpath = manifest_path(out_path);
    std::fs::write(&mpath, serde_json::to_string_pretty(&manifest).unwrap())?;
    Ok(mpath)
}

pub fn manifest_path(out_path: &Path) -> PathBuf {
    let mut name = out_path.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out_path.with_file_name(name)
}

/// Numeric comparison for Opt-kind replays: every number within tolerance.
pub fn json_approx_eq(a: &serde_json::Value, b: &serde_json::Value, tol: f64) -> bool {
    use serde_json::Value::*;
    match (a, b) {
        (Number(x), Number(y)) => {
            let (x, y) = (
                x.as_f64().unwrap_or(f64::NAN),
                y.as_f64().unwrap_or(f64::NAN),
            );
            if x.is_nan() && y.is_nan() {
                return true;
            }
            (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()))
        }
        (Array(x), Array(y)) => {
            x.len() == y.len() && x.iter().zip(y).all(|(u, v)| json_approx_eq(u, v, tol))
        }
        (Object(x), Object(y)) => {
            x.len() == y.len()
                && x.iter()
                    .all(|(k, u)| y.get(k).map(|v| json_approx_eq(u, v, tol)).unwrap_or(false))
        }
        _ => a == b,
    }
}
