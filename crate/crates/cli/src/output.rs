//! File emission: every generated data file is listed in a manifest holding
//! the command, its full parameter set, the library version, and timing, so
//! any output can be reproduced exactly.

use crate::CliError;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::Duration;

/// Manifest contents gathered while a command runs; the wall-clock duration
/// is filled in at the end.
pub struct ManifestDraft {
    pub command: &'static str,
    pub params: serde_json::Value,
    pub rng_seed: Option<u64>,
    pub outputs: Vec<PathBuf>,
    pub manifest_path: PathBuf,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    params: &'a serde_json::Value,
    library_version: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    rng_seed: Option<u64>,
    outputs: Vec<String>,
    duration_ms: u128,
}

pub fn write_manifest(draft: ManifestDraft, duration: Duration) -> Result<(), CliError> {
    let manifest = RunManifest {
        command: draft.command,
        params: &draft.params,
        library_version: env!("CARGO_PKG_VERSION"),
        rng_seed: draft.rng_seed,
        outputs: draft
            .outputs
            .iter()
            .map(|p| p.display().to_string())
            .collect(),
        duration_ms: duration.as_millis(),
    };
    let mut body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    body.push('\n');
    write_file(&draft.manifest_path, body.as_bytes())
}

/// Creates the output directory if needed and returns the path of `name`
/// inside it.
pub fn prepare(out_dir: &Path, name: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    Ok(out_dir.join(name))
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Pretty JSON with a trailing newline; values print at full precision and
/// re-parse to the same bits.
pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut body = serde_json::to_string_pretty(value).expect("report serializes");
    body.push('\n');
    body.into_bytes()
}
