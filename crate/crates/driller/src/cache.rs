//! Per-commit bundle cache: `cache_dir/<fingerprint>/<sha>`, one canonical
//! JSON bundle per file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use grepo_core::{CommitBundle, ProjectId};
use sha1::{Digest, Sha1};

/// Bumped whenever metric computation or bundle extraction changes output.
pub const METRICS_VERSION: &str = "grepo-metrics-1";

/// Identifies the extraction settings a cached bundle was produced under.
pub fn config_fingerprint(project: &ProjectId, index_source_code: bool) -> String {
    let mut h = Sha1::new();
    h.update(format!("{}|{}|{}", project.as_str(), index_source_code, METRICS_VERSION).as_bytes());
    hex::encode(h.finalize())
}

/// A cache rooted at one fingerprint directory, or a no-op when disabled.
#[derive(Clone, Debug)]
pub struct BundleCache {
    dir: Option<PathBuf>,
}

impl BundleCache {
    pub fn disabled() -> Self {
        Self { dir: None }
    }

    pub fn new(cache_dir: Option<&Path>, fingerprint: &str) -> Self {
        Self { dir: cache_dir.map(|d| d.join(fingerprint)) }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    fn entry(&self, sha: &str) -> Option<PathBuf> {
        let valid = !sha.is_empty() && sha.chars().all(|c| c.is_ascii_hexdigit());
        self.dir.as_ref().filter(|_| valid).map(|d| d.join(sha))
    }

    /// The cached bundle for `sha`. Unreadable or undecodable entries are
    /// removed and reported as a miss.
    pub fn get(&self, sha: &str) -> Option<CommitBundle> {
        let path = self.entry(sha)?;
        let bytes = fs::read(&path).ok()?;
        match serde_json::from_slice::<CommitBundle>(&bytes) {
            Ok(b) if b.commit.sha == sha => Some(b),
            _ => {
                log::warn!("evicting corrupt cache entry {}", path.display());
                let _ = fs::remove_file(&path);
                None
            }
        }
    }

    /// Stores a bundle; failures only cost a future miss.
    pub fn put(&self, sha: &str, bundle: &CommitBundle) {
        let Some(path) = self.entry(sha) else { return };
        if let Err(e) = write_atomic(&path, bundle) {
            log::warn!("cannot write cache entry {}: {e}", path.display());
        }
    }
}

fn write_atomic(path: &Path, bundle: &CommitBundle) -> std::io::Result<()> {
    let dir = path.parent().expect("entry has a parent");
    fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("entry");
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(&serde_json::to_vec(bundle)?)?;
    f.sync_all()?;
    fs::rename(&tmp, path)
}
