//! Extracts git history into the repository graph.
//!
//! [`drill`] walks every commit in a configured author-date window, turns
//! each into a [`grepo_core::CommitBundle`] (files, per-function metrics,
//! branches), and inserts the bundles in batches.

pub mod attribution;
pub mod bind;
pub mod cache;
pub mod config;
pub mod drill;
pub mod extract;
pub mod lang;

use std::path::PathBuf;

use thiserror::Error;

pub use attribution::{attribute_method_changes, LineRange};
pub use cache::{config_fingerprint, BundleCache, METRICS_VERSION};
pub use config::{ConfigError, LoadedConfig, ProjectConfig, DEFAULT_BATCH_SIZE};
pub use drill::{drill, drill_into_db, drill_with_cache, make_batches, open_store, DrillReport, LabelCount, StoreLock};
pub use extract::{extract_commit, ExtractOptions};
pub use lang::{cyclomatic_complexity, detect_methods, Language, MethodDecl};

#[derive(Debug, Error)]
pub enum DrillError {
    #[error("cannot open repository {path}: {source}")]
    Repo { path: PathBuf, source: git2::Error },
    #[error("unknown commit {0}")]
    UnknownCommit(String),
    #[error("store is locked by another writer ({})", .0.display())]
    Locked(PathBuf),
    #[error("git: {0}")]
    Git(#[from] git2::Error),
    #[error(transparent)]
    Store(#[from] grepo_core::StoreError),
    #[error(transparent)]
    Model(#[from] grepo_core::ModelError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
