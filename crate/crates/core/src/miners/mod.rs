//! Read-only query layer.
//!
//! A [`MineManager`] scopes a store to one project and hands out four
//! lightweight miners, one per node type, built on first use:
//!
//! | miner            | queries                                        |
//! |------------------|------------------------------------------------|
//! | [`CommitMiner`]  | commits (optionally by branch), parents        |
//! | [`DeveloperMiner`] | files by type (Q4), mean method CCN (Q5)     |
//! | [`FileMiner`]    | #loc history (Q2), methods of a file           |
//! | [`MethodMiner`]  | CCN history of a method, of a whole file (Q3)  |
//!
//! Every result is a detached [`QueryResult`] with a documented total order.

mod commit;
mod developer;
mod file;
mod method;
mod result;

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::error::QueryError;
use crate::model::{node_id, NodeId, NodeLabel, ProjectId};
use crate::store::{Direction, GraphStore, NodeRecord};
use crate::EdgeLabel;

pub use commit::CommitMiner;
pub use developer::DeveloperMiner;
pub use file::FileMiner;
pub use method::{MethodMiner, Q3Mode};
pub use result::{Column, QueryResult, Scalar, ScalarType};

/// Shared state every miner reads through.
#[derive(Clone)]
pub(crate) struct Scope<'s> {
    pub(crate) store: &'s GraphStore,
    pub(crate) project: ProjectId,
    update_method_traversals: Arc<AtomicU64>,
}

impl<'s> Scope<'s> {
    pub(crate) fn in_project(&self, rec: &NodeRecord) -> bool {
        rec.project() == Some(self.project.as_str())
    }

    /// Commits of this project authored by `dev`.
    pub(crate) fn authored_commits(&self, dev: &NodeId) -> Vec<&'s NodeId> {
        self.store
            .neighbor_ids(dev, EdgeLabel::Author, Direction::Out)
            .iter()
            .filter(|c| self.store.node(c).is_some_and(|r| self.in_project(r)))
            .collect()
    }

    /// Marks one store round trip that expands `UpdateMethod` edges.
    pub(crate) fn count_update_method_traversal(&self) {
        self.update_method_traversals.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn resolve_file(&self, file: &str) -> Result<NodeId, QueryError> {
        if let Ok(id) = NodeId::parse(file) {
            if let Some(rec) = self.store.node(&id) {
                if rec.label == NodeLabel::File && self.in_project(rec) {
                    return Ok(id);
                }
            }
        }
        self.store
            .path_alias(&self.project, file)
            .cloned()
            .ok_or_else(|| QueryError::NotFound(format!("file `{file}` in project {}", self.project)))
    }

    pub(crate) fn resolve_developer(&self, dev: &str) -> Result<NodeId, QueryError> {
        let id = match NodeId::parse(dev) {
            Ok(id) if self.store.node(&id).is_some_and(|r| r.label == NodeLabel::Developer) => id,
            _ if dev.is_empty() => return Err(QueryError::NotFound("empty developer".into())),
            _ => node_id(NodeLabel::Developer, &[&dev.trim().to_lowercase()])?,
        };
        match self.store.node(&id) {
            Some(r) if r.label == NodeLabel::Developer => Ok(id),
            _ => Err(QueryError::NotFound(format!("developer `{dev}`"))),
        }
    }

    pub(crate) fn resolve_method(&self, method: &NodeId) -> Result<&'s NodeRecord, QueryError> {
        match self.store.node(method) {
            Some(r) if r.label == NodeLabel::Method && self.in_project(r) => Ok(r),
            _ => Err(QueryError::NotFound(format!("method {method}"))),
        }
    }

    /// Developers with at least one commit in this project, sorted by id.
    pub(crate) fn project_developers(&self) -> Vec<NodeId> {
        let mut devs: Vec<NodeId> = self
            .store
            .nodes_by_label(NodeLabel::Commit, Some(&self.project))
            .iter()
            .flat_map(|c| self.store.neighbor_ids(c, EdgeLabel::Author, Direction::In))
            .cloned()
            .collect();
        devs.sort();
        devs.dedup();
        devs
    }
}

/// The query shapes whose targets are picked by worst-case degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WorstCaseQuery {
    Q2,
    Q3,
    Q4,
    Q5,
}

/// A worst-case query target.
///
/// `degree` is the quantity maximized when picking the node; `workload` is
/// the size reported alongside the timing (updates for Q2 and Q5, methods
/// for Q3, files for Q4).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorstCase {
    pub target: NodeId,
    pub degree: u64,
    pub workload: u64,
}

/// Coordinates the four miners over one store and project.
pub struct MineManager<'s> {
    scope: Scope<'s>,
    commits: OnceLock<CommitMiner<'s>>,
    developers: OnceLock<DeveloperMiner<'s>>,
    files: OnceLock<FileMiner<'s>>,
    methods: OnceLock<MethodMiner<'s>>,
}

impl<'s> MineManager<'s> {
    pub fn new(store: &'s GraphStore, project: ProjectId) -> Self {
        Self {
            scope: Scope { store, project, update_method_traversals: Arc::new(AtomicU64::new(0)) },
            commits: OnceLock::new(),
            developers: OnceLock::new(),
            files: OnceLock::new(),
            methods: OnceLock::new(),
        }
    }

    pub fn project(&self) -> &ProjectId {
        &self.scope.project
    }

    pub fn store(&self) -> &'s GraphStore {
        self.scope.store
    }

    pub fn commits(&self) -> &CommitMiner<'s> {
        self.commits.get_or_init(|| CommitMiner::new(self.scope.clone()))
    }

    pub fn developers(&self) -> &DeveloperMiner<'s> {
        self.developers.get_or_init(|| DeveloperMiner::new(self.scope.clone()))
    }

    pub fn files(&self) -> &FileMiner<'s> {
        self.files.get_or_init(|| FileMiner::new(self.scope.clone()))
    }

    pub fn methods(&self) -> &MethodMiner<'s> {
        self.methods.get_or_init(|| MethodMiner::new(self.scope.clone()))
    }

    /// Which miners have been handed out so far.
    pub fn initialized_miners(&self) -> [bool; 4] {
        [
            self.commits.get().is_some(),
            self.developers.get().is_some(),
            self.files.get().is_some(),
            self.methods.get().is_some(),
        ]
    }

    /// Number of store round trips that expanded `UpdateMethod` edges.
    pub fn update_method_traversals(&self) -> u64 {
        self.scope.update_method_traversals.load(Ordering::Relaxed)
    }

    pub fn reset_traversal_count(&self) {
        self.scope.update_method_traversals.store(0, Ordering::Relaxed);
    }

    /// Q1: every node and relationship of the project, as two tables.
    ///
    /// Nodes are `(label, id, props)` sorted by `(label, id)`; edges are
    /// `(label, src, dst, props)` sorted by `(label, src, dst)`. `props` is
    /// the canonical JSON object with sorted keys.
    pub fn q1_all(&self) -> (QueryResult, QueryResult) {
        let store = self.scope.store;
        let project = &self.scope.project;
        let mut nodes = QueryResult::new(vec![
            Column::new("label", ScalarType::Str),
            Column::new("id", ScalarType::Str),
            Column::new("props", ScalarType::Str),
        ]);
        for (label, id) in store.sorted_nodes(Some(project)) {
            let rec = store.node(&id).expect("sorted node exists");
            nodes.push_row(vec![
                Scalar::Str(label.as_str().into()),
                Scalar::Str(id.as_str().into()),
                Scalar::Str(serde_json::to_string(&rec.props).expect("props serialize")),
            ]);
        }
        let mut edges = QueryResult::new(vec![
            Column::new("label", ScalarType::Str),
            Column::new("src", ScalarType::Str),
            Column::new("dst", ScalarType::Str),
            Column::new("props", ScalarType::Str),
        ]);
        for (label, src, dst, props) in store.sorted_edges(Some(project)) {
            edges.push_row(vec![
                Scalar::Str(label.as_str().into()),
                Scalar::Str(src.as_str().into()),
                Scalar::Str(dst.as_str().into()),
                Scalar::Str(serde_json::to_string(props).expect("props serialize")),
            ]);
        }
        (nodes, edges)
    }

    /// Picks the node with the highest relevant degree for `query`; ties go
    /// to the smallest id.
    pub fn worst_case_target(&self, query: WorstCaseQuery) -> Result<WorstCase, QueryError> {
        let candidates: Vec<WorstCase> = match query {
            WorstCaseQuery::Q2 => self.files().update_degrees(),
            WorstCaseQuery::Q3 => self.files().method_update_degrees(),
            WorstCaseQuery::Q4 => self.developers().file_degrees(),
            WorstCaseQuery::Q5 => self.developers().method_update_degrees(),
        };
        let mut best: Option<WorstCase> = None;
        for c in candidates {
            let better = match &best {
                None => true,
                Some(b) => c.degree > b.degree || (c.degree == b.degree && c.target < b.target),
            };
            if better {
                best = Some(c);
            }
        }
        best.ok_or_else(|| {
            QueryError::NotFound(format!("no {query:?} candidates in project {}", self.scope.project))
        })
    }

    pub fn resolve_file(&self, file: &str) -> Result<NodeId, QueryError> {
        self.scope.resolve_file(file)
    }

    pub fn resolve_developer(&self, dev: &str) -> Result<NodeId, QueryError> {
        self.scope.resolve_developer(dev)
    }
}
