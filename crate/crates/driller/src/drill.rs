//! The drilling run: walk, extract (or reuse cached bundles), bind, batch,
//! insert.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use git2::Repository;
use grepo_core::{CommitBundle, EdgeLabel, GraphStore, InsertClass, InsertOutcome, NodeLabel};
use serde::Serialize;

use crate::bind::FileResolver;
use crate::cache::{config_fingerprint, BundleCache};
use crate::config::ProjectConfig;
use crate::extract::{branch_membership, commits_in_window, extract_with_branches, ExtractOptions};
use crate::DrillError;

/// Splits a stream into consecutive chunks of `size`; only the last may be
/// shorter.
pub fn make_batches<T>(items: impl IntoIterator<Item = T>, size: usize) -> impl Iterator<Item = Vec<T>> {
    assert!(size >= 1, "batch size must be at least 1");
    let mut items = items.into_iter().peekable();
    std::iter::from_fn(move || {
        items.peek()?;
        Some(items.by_ref().take(size).collect())
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LabelCount {
    pub created: u64,
    pub updated: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DrillReport {
    pub project_id: String,
    pub commits: u64,
    pub batches: u64,
    pub nodes: BTreeMap<String, LabelCount>,
    pub edges: BTreeMap<String, LabelCount>,
    /// Git walking, diffing, metrics and cache reads.
    pub extraction_ms: f64,
    /// Store time per node or edge label.
    pub insert_ms: BTreeMap<String, f64>,
    pub insert_total_ms: f64,
    pub total_ms: f64,
    pub cache_hits: u64,
    pub cache_misses: u64,
}

impl DrillReport {
    pub fn created(&self) -> u64 {
        self.nodes.values().chain(self.edges.values()).map(|c| c.created).sum()
    }

    pub fn created_nodes(&self, label: NodeLabel) -> u64 {
        self.nodes.get(label.as_str()).map_or(0, |c| c.created)
    }

    pub fn created_edges(&self, label: EdgeLabel) -> u64 {
        self.edges.get(label.as_str()).map_or(0, |c| c.created)
    }

    /// The label whose inserts took longest, with its time.
    pub fn most_costly_insert(&self) -> Option<(&str, f64)> {
        self.insert_ms
            .iter()
            .max_by(|a, b| a.1.total_cmp(b.1).then_with(|| b.0.cmp(a.0)))
            .map(|(l, t)| (l.as_str(), *t))
    }

    fn absorb(&mut self, outcome: &InsertOutcome) {
        for (class, c) in &outcome.counts {
            let (map, key) = match class {
                InsertClass::Node(l) => (&mut self.nodes, l.as_str()),
                InsertClass::Edge(l) => (&mut self.edges, l.as_str()),
            };
            let e = map.entry(key.to_owned()).or_default();
            e.created += c.created;
            e.updated += c.updated;
        }
        for (class, d) in &outcome.timings {
            *self.insert_ms.entry(class.to_string()).or_default() += ms(*d);
        }
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1000.0
}

fn empty_report(config: &ProjectConfig) -> DrillReport {
    let mut r = DrillReport { project_id: config.project_id.as_str().to_owned(), ..Default::default() };
    for l in NodeLabel::ALL {
        r.nodes.insert(l.as_str().to_owned(), LabelCount::default());
        r.insert_ms.insert(l.as_str().to_owned(), 0.0);
    }
    for l in EdgeLabel::ALL {
        r.edges.insert(l.as_str().to_owned(), LabelCount::default());
        r.insert_ms.insert(l.as_str().to_owned(), 0.0);
    }
    r
}

/// Drills `config.repo_path` into `store`. The cache is used when
/// `config.cache_dir` is set.
pub fn drill(config: &ProjectConfig, store: &mut GraphStore) -> Result<DrillReport, DrillError> {
    let cache = BundleCache::new(
        config.cache_dir.as_deref(),
        &config_fingerprint(&config.project_id, config.index_source_code),
    );
    drill_with_cache(config, store, &cache)
}

pub fn drill_with_cache(
    config: &ProjectConfig,
    store: &mut GraphStore,
    cache: &BundleCache,
) -> Result<DrillReport, DrillError> {
    let started = Instant::now();
    let mut report = empty_report(config);
    let repo = Repository::open(&config.repo_path)
        .map_err(|source| DrillError::Repo { path: config.repo_path.clone(), source })?;
    let opts = ExtractOptions { project_id: config.project_id.clone(), index_source_code: config.index_source_code };

    let mut extraction = Duration::ZERO;
    let t = Instant::now();
    let oids = commits_in_window(&repo, config.start_date, config.end_date)?;
    let branches = branch_membership(&repo)?;
    extraction += t.elapsed();

    let mut resolver = FileResolver::new(config.project_id.clone());
    let mut insert = Duration::ZERO;
    for chunk in make_batches(oids, config.batch_size) {
        let mut batch: Vec<CommitBundle> = Vec::with_capacity(chunk.len());
        for oid in chunk {
            let t = Instant::now();
            let sha = oid.to_string();
            let mut bundle = match cache.get(&sha) {
                Some(b) => {
                    report.cache_hits += 1;
                    b
                }
                None => {
                    let commit = repo.find_commit(oid)?;
                    let b = extract_with_branches(&repo, &commit, &opts, &[])?;
                    if cache.is_enabled() {
                        report.cache_misses += 1;
                        cache.put(&sha, &b);
                    }
                    b
                }
            };
            extraction += t.elapsed();
            bundle.branches = branches
                .get(&oid)
                .into_iter()
                .flatten()
                .map(|name| grepo_core::BranchNode::new(&config.project_id, name))
                .collect::<Result<_, _>>()?;
            // Binding consults the store, so earlier batches must already be
            // in it; the resolver covers bundles of the current batch.
            resolver.bind(store, &mut bundle)?;
            batch.push(bundle);
        }
        let t = Instant::now();
        let outcome = store.insert_batch(&batch)?;
        insert += t.elapsed();
        report.absorb(&outcome);
        report.commits += batch.len() as u64;
        report.batches += 1;
    }
    report.extraction_ms = ms(extraction);
    report.insert_total_ms = ms(insert).max(report.insert_ms.values().sum());
    report.total_ms = ms(started.elapsed()).max(report.extraction_ms + report.insert_total_ms);
    Ok(report)
}

/// Exclusive writer lock on a database path, held as `<db_path>.lock`.
#[derive(Debug)]
pub struct StoreLock {
    path: PathBuf,
}

impl StoreLock {
    pub fn acquire(db_path: &Path) -> Result<Self, DrillError> {
        let mut name = db_path.as_os_str().to_owned();
        name.push(".lock");
        let path = PathBuf::from(name);
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(Self { path })
            }
            Err(e) if e.kind() == ErrorKind::AlreadyExists => Err(DrillError::Locked(path)),
            Err(e) => Err(e.into()),
        }
    }
}

impl Drop for StoreLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

/// Opens the snapshot at `db_path` (empty store when absent).
pub fn open_store(db_path: &Path) -> Result<GraphStore, DrillError> {
    if db_path.exists() {
        Ok(GraphStore::snapshot_load(db_path)?)
    } else {
        Ok(GraphStore::new())
    }
}

/// Locks `config.db_path`, drills into its snapshot and saves it back.
pub fn drill_into_db(config: &ProjectConfig) -> Result<(DrillReport, GraphStore), DrillError> {
    let _lock = StoreLock::acquire(&config.db_path)?;
    let mut store = open_store(&config.db_path)?;
    let report = drill(config, &mut store)?;
    store.snapshot_save(&config.db_path)?;
    Ok((report, store))
}
