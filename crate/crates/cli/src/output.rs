//! Output files: atomic writes, run manifests and input digests.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

use crate::error::CliError;

/// Relative output paths are placed under this directory when it is set.
pub const OUT_DIR_VAR: &str = "DUALGAP_OUT_DIR";

pub fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// `out` with its extension replaced by `suffix` (e.g. `sweep.csv` →
/// `sweep.manifest.json`).
pub fn sibling(out: &Path, suffix: &str) -> PathBuf {
    out.with_extension(suffix)
}

/// Hex SHA-256 over the input document and the normalised flags.
pub fn input_digest(command: &str, input: &[u8], flags: &[(&str, String)]) -> String {
    let mut h = Sha256::new();
    h.update(b"dualgap-input\0");
    h.update(command.as_bytes());
    h.update(b"\0");
    h.update((input.len() as u64).to_le_bytes());
    h.update(input);
    for (k, v) in flags {
        h.update(k.as_bytes());
        h.update(b"=");
        h.update(v.as_bytes());
        h.update(b"\0");
    }
    format!("{:x}", h.finalize())
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub input_digest: String,
    pub toolkit_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub outputs: Vec<String>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl Manifest {
    pub fn new(command: &str, input_digest: String) -> Self {
        Manifest {
            command: command.into(),
            input_digest,
            toolkit_version: env!("CARGO_PKG_VERSION").into(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            outputs: Vec::new(),
            extra: Map::new(),
        }
    }
}

/// Files to be written together; either all land or none do.
#[derive(Debug, Default)]
pub struct OutputSet {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl OutputSet {
    pub fn add(&mut self, path: PathBuf, contents: impl Into<Vec<u8>>) {
        self.files.push((path, contents.into()));
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.files.iter().map(|(p, _)| p.as_path())
    }

    /// Writes every file through a temporary in the target directory and a
    /// rename. Already-written files are removed if a later one fails.
    pub fn commit(self) -> Result<Vec<PathBuf>, CliError> {
        let mut done: Vec<PathBuf> = Vec::with_capacity(self.files.len());
        for (path, bytes) in &self.files {
            if let Err(e) = write_atomic(path, bytes) {
                for p in &done {
                    let _ = std::fs::remove_file(p);
                }
                return Err(CliError::Io(format!("{}: {e}", path.display())));
            }
            done.push(path.clone());
        }
        Ok(done)
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Name used for `path` inside a manifest next to it.
pub fn file_name(path: &Path) -> String {
    path.file_name()
        .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_tracks_every_input_byte() {
        let a = input_digest("report", b"{}", &[("vmax", "12".into())]);
        assert_eq!(a, input_digest("report", b"{}", &[("vmax", "12".into())]));
        assert_ne!(a, input_digest("report", b"{ }", &[("vmax", "12".into())]));
        assert_ne!(a, input_digest("report", b"{}", &[("vmax", "13".into())]));
        assert_ne!(a, input_digest("cv-sweep", b"{}", &[("vmax", "12".into())]));
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn failed_commit_leaves_nothing_behind() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("a.csv");
        let bad = dir.path().join("missing").join("b.csv");
        let mut set = OutputSet::default();
        set.add(good.clone(), "x\n");
        set.add(bad, "y\n");
        assert!(set.commit().is_err());
        assert!(!good.exists());
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
    }

    #[test]
    fn sibling_names() {
        assert_eq!(sibling(Path::new("out/cv.csv"), "manifest.json"), PathBuf::from("out/cv.manifest.json"));
        assert_eq!(sibling(Path::new("cv"), "manifest.json"), PathBuf::from("cv.manifest.json"));
    }
}
