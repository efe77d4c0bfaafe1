//! Embedded labeled property graph.
//!
//! Nodes and edges live in insertion-ordered maps so that snapshots replay
//! adjacency lists in their original order. Four indexes sit beside them:
//! label (partitioned by project), outgoing and incoming adjacency keyed by
//! `(node, edge label)`, and a path alias index resolving every path a file
//! was ever seen under to its node.
//!
//! Writers need `&mut GraphStore`; share a store between threads through
//! [`SharedStore`] to get the readers-writer contract.

mod dump;
mod snapshot;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};
use std::time::{Duration, Instant};

use indexmap::IndexMap;

use crate::bundle::CommitBundle;
use crate::error::{ModelError, StoreError};
use crate::model::{
    node_id, Edge, EdgeLabel, FileNode, Node, NodeId, NodeLabel, ProjectId, Props, Value,
};

pub use snapshot::SNAPSHOT_MAGIC;

pub type SharedStore = Arc<RwLock<GraphStore>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Upsert {
    Created,
    Updated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodeRecord {
    pub label: NodeLabel,
    pub props: Props,
}

impl NodeRecord {
    pub fn project(&self) -> Option<&str> {
        self.props.get("project_id").and_then(Value::as_str)
    }

    pub fn str_prop(&self, key: &str) -> Option<&str> {
        self.props.get(key).and_then(Value::as_str)
    }

    pub fn int_prop(&self, key: &str) -> Option<i64> {
        self.props.get(key).and_then(Value::as_int)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct EdgeKey {
    label: EdgeLabel,
    src: NodeId,
    dst: NodeId,
}

/// Something an insert spends time on: a node label or an edge label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InsertClass {
    Node(NodeLabel),
    Edge(EdgeLabel),
}

impl fmt::Display for InsertClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InsertClass::Node(l) => f.write_str(l.as_str()),
            InsertClass::Edge(l) => f.write_str(l.as_str()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UpsertCounts {
    pub created: u64,
    pub updated: u64,
}

impl UpsertCounts {
    fn record(&mut self, outcome: Upsert) {
        match outcome {
            Upsert::Created => self.created += 1,
            Upsert::Updated => self.updated += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.created + self.updated
    }
}

/// Result of inserting one or more bundles.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct InsertOutcome {
    pub timings: BTreeMap<InsertClass, Duration>,
    pub counts: BTreeMap<InsertClass, UpsertCounts>,
}

impl InsertOutcome {
    pub fn merge(&mut self, other: &InsertOutcome) {
        for (class, d) in &other.timings {
            *self.timings.entry(*class).or_default() += *d;
        }
        for (class, c) in &other.counts {
            let e = self.counts.entry(*class).or_default();
            e.created += c.created;
            e.updated += c.updated;
        }
    }

    pub fn total_time(&self) -> Duration {
        self.timings.values().sum()
    }

    pub fn created(&self) -> u64 {
        self.counts.values().map(|c| c.created).sum()
    }

    fn empty() -> Self {
        let mut out = InsertOutcome::default();
        for l in NodeLabel::ALL {
            out.timings.insert(InsertClass::Node(l), Duration::ZERO);
            out.counts.insert(InsertClass::Node(l), UpsertCounts::default());
        }
        for l in EdgeLabel::ALL {
            out.timings.insert(InsertClass::Edge(l), Duration::ZERO);
            out.counts.insert(InsertClass::Edge(l), UpsertCounts::default());
        }
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct GraphStore {
    nodes: IndexMap<NodeId, NodeRecord>,
    label_index: BTreeMap<NodeLabel, BTreeMap<String, BTreeSet<NodeId>>>,
    edges: IndexMap<EdgeKey, Props>,
    out_adj: HashMap<(NodeId, EdgeLabel), Vec<NodeId>>,
    in_adj: HashMap<(NodeId, EdgeLabel), Vec<NodeId>>,
    path_alias: BTreeMap<(String, String), NodeId>,
}

fn partition_key(label: NodeLabel, props: &Props) -> Result<String, ModelError> {
    if !label.is_project_scoped() {
        return Ok(String::new());
    }
    let project = props
        .get("project_id")
        .and_then(Value::as_str)
        .ok_or_else(|| ModelError::MissingProperty("project_id".into()))?;
    Ok(ProjectId::new(project)?.as_str().to_owned())
}

impl GraphStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn into_shared(self) -> SharedStore {
        Arc::new(RwLock::new(self))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn count_nodes(&self, label: NodeLabel) -> usize {
        self.label_index.get(&label).map_or(0, |parts| parts.values().map(BTreeSet::len).sum())
    }

    pub fn count_edges(&self, label: EdgeLabel) -> usize {
        self.edges.keys().filter(|k| k.label == label).count()
    }

    pub fn upsert_node(&mut self, node: Node) -> Result<Upsert, StoreError> {
        let key = partition_key(node.label, &node.props)?;
        if let Some(existing) = self.nodes.get_mut(&node.id) {
            if existing.label != node.label {
                return Err(StoreError::LabelMismatch {
                    id: node.id,
                    existing: existing.label,
                    attempted: node.label,
                });
            }
            let old_key = partition_key(existing.label, &existing.props)?;
            existing.props = node.props;
            if old_key != key {
                let parts = self.label_index.entry(node.label).or_default();
                if let Some(set) = parts.get_mut(&old_key) {
                    set.remove(&node.id);
                }
                parts.entry(key).or_default().insert(node.id);
            }
            return Ok(Upsert::Updated);
        }
        self.label_index
            .entry(node.label)
            .or_default()
            .entry(key)
            .or_default()
            .insert(node.id.clone());
        self.nodes.insert(node.id, NodeRecord { label: node.label, props: node.props });
        Ok(Upsert::Created)
    }

    fn check_edge(&self, edge: &Edge) -> Result<(), StoreError> {
        let (want_src, want_dst) = edge.label.endpoints();
        let src = self
            .nodes
            .get(&edge.src)
            .ok_or_else(|| StoreError::MissingEndpoint { label: edge.label, id: edge.src.clone() })?;
        let dst = self
            .nodes
            .get(&edge.dst)
            .ok_or_else(|| StoreError::MissingEndpoint { label: edge.label, id: edge.dst.clone() })?;
        if src.label != want_src || dst.label != want_dst {
            return Err(StoreError::EndpointLabel {
                label: edge.label,
                expected_src: want_src,
                expected_dst: want_dst,
                src: src.label,
                dst: dst.label,
            });
        }
        Ok(())
    }

    pub fn upsert_edge(&mut self, edge: Edge) -> Result<Upsert, StoreError> {
        self.check_edge(&edge)?;
        let key = EdgeKey { label: edge.label, src: edge.src, dst: edge.dst };
        if let Some(props) = self.edges.get_mut(&key) {
            *props = edge.props;
            return Ok(Upsert::Updated);
        }
        self.out_adj.entry((key.src.clone(), key.label)).or_default().push(key.dst.clone());
        self.in_adj.entry((key.dst.clone(), key.label)).or_default().push(key.src.clone());
        self.edges.insert(key, edge.props);
        Ok(Upsert::Created)
    }

    /// Detached copy of a node.
    pub fn get_node(&self, id: &NodeId) -> Option<Node> {
        self.nodes
            .get(id)
            .map(|r| Node { id: id.clone(), label: r.label, props: r.props.clone() })
    }

    pub fn node(&self, id: &NodeId) -> Option<&NodeRecord> {
        self.nodes.get(id)
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.nodes.contains_key(id)
    }

    /// Ids of all nodes with `label`, sorted. Developers ignore the project
    /// filter since they are global.
    pub fn nodes_by_label(&self, label: NodeLabel, project: Option<&ProjectId>) -> Vec<NodeId> {
        let Some(parts) = self.label_index.get(&label) else {
            return Vec::new();
        };
        match project {
            Some(p) if label.is_project_scoped() => {
                parts.get(p.as_str()).map(|s| s.iter().cloned().collect()).unwrap_or_default()
            }
            _ => {
                let mut all: Vec<NodeId> = parts.values().flatten().cloned().collect();
                all.sort();
                all
            }
        }
    }

    pub fn projects(&self) -> BTreeSet<String> {
        self.label_index
            .values()
            .flat_map(|parts| parts.keys())
            .filter(|k| !k.is_empty())
            .cloned()
            .collect()
    }

    /// Records `path` as an alias of `file`. The first file seen under a path
    /// keeps it.
    pub fn register_path(&mut self, project: &ProjectId, path: &str, file: &NodeId) {
        self.path_alias
            .entry((project.as_str().to_owned(), path.to_owned()))
            .or_insert_with(|| file.clone());
    }

    pub fn path_alias(&self, project: &ProjectId, path: &str) -> Option<&NodeId> {
        self.path_alias.get(&(project.as_str().to_owned(), path.to_owned()))
    }

    pub fn resolve_path(&self, project: &ProjectId, path: &str) -> Option<FileNode> {
        let id = self.path_alias(project, path)?;
        let rec = self.nodes.get(id)?;
        FileNode::from_props(id.clone(), &rec.props).ok()
    }

    /// Peer ids in insertion order, borrowed from the adjacency index.
    pub fn neighbor_ids(&self, id: &NodeId, label: EdgeLabel, dir: Direction) -> &[NodeId] {
        let adj = match dir {
            Direction::Out => &self.out_adj,
            Direction::In => &self.in_adj,
        };
        adj.get(&(id.clone(), label)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn edge_props(&self, label: EdgeLabel, src: &NodeId, dst: &NodeId) -> Option<&Props> {
        self.edges.get(&EdgeKey { label, src: src.clone(), dst: dst.clone() })
    }

    /// Detached adjacency list: `(peer, edge props)` in insertion order.
    pub fn neighbors(
        &self,
        id: &NodeId,
        label: EdgeLabel,
        dir: Direction,
    ) -> Result<Vec<(NodeId, Props)>, StoreError> {
        if !self.nodes.contains_key(id) {
            return Err(StoreError::UnknownNode(id.clone()));
        }
        Ok(self
            .neighbor_ids(id, label, dir)
            .iter()
            .map(|peer| {
                let (src, dst) = match dir {
                    Direction::Out => (id, peer),
                    Direction::In => (peer, id),
                };
                let props = self.edge_props(label, src, dst).cloned().unwrap_or_default();
                (peer.clone(), props)
            })
            .collect())
    }

    /// Total serialized size of all property maps on edges of `label`.
    pub fn edge_payload_bytes(&self, label: EdgeLabel) -> usize {
        self.edges
            .iter()
            .filter(|(k, _)| k.label == label)
            .map(|(_, p)| serde_json::to_string(p).map_or(0, |s| s.len()))
            .sum()
    }

    /// Iterates every edge as `(label, src, dst, props)` in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeLabel, &NodeId, &NodeId, &Props)> {
        self.edges.iter().map(|(k, p)| (k.label, &k.src, &k.dst, p))
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&NodeId, &NodeRecord)> {
        self.nodes.iter()
    }

    /// Project an edge belongs to: that of its non-developer endpoint.
    pub fn edge_project(&self, label: EdgeLabel, src: &NodeId, dst: &NodeId) -> Option<&str> {
        let owner = if label == EdgeLabel::Author { dst } else { src };
        self.nodes.get(owner).and_then(NodeRecord::project)
    }

    /// Inserts one bundle atomically: every node and edge is validated
    /// against the current store before anything is written.
    pub fn insert_bundle(&mut self, bundle: &CommitBundle) -> Result<InsertOutcome, StoreError> {
        let staged = self.stage(bundle)?;
        Ok(self.apply(staged))
    }

    /// Inserts bundles in order; each bundle is atomic on its own.
    pub fn insert_batch(&mut self, bundles: &[CommitBundle]) -> Result<InsertOutcome, StoreError> {
        let mut total = InsertOutcome::empty();
        for b in bundles {
            total.merge(&self.insert_bundle(b)?);
        }
        Ok(total)
    }

    fn stage(&self, bundle: &CommitBundle) -> Result<Staged, StoreError> {
        let project = &bundle.commit.project_id;
        // Building a label's records (notably copying UpdateFile source
        // text) is part of that label's insert cost.
        let mut timings: BTreeMap<InsertClass, Duration> = BTreeMap::new();
        let mut timed = |class: InsertClass, start: Instant| *timings.entry(class).or_default() += start.elapsed();
        let mut nodes: Vec<Node> = Vec::new();
        let t = Instant::now();
        nodes.push((&bundle.developer).into());
        timed(InsertClass::Node(NodeLabel::Developer), t);
        let t = Instant::now();
        nodes.push((&bundle.commit).into());
        timed(InsertClass::Node(NodeLabel::Commit), t);
        let t = Instant::now();
        nodes.extend(bundle.branches.iter().map(Node::from));
        timed(InsertClass::Node(NodeLabel::Branch), t);
        let t = Instant::now();
        for fc in &bundle.file_changes {
            fc.update.validate()?;
            nodes.push((&fc.file).into());
        }
        timed(InsertClass::Node(NodeLabel::File), t);
        let t = Instant::now();
        for mc in &bundle.method_changes {
            nodes.push((&mc.method).into());
        }
        timed(InsertClass::Node(NodeLabel::Method), t);

        let mut staged_labels: HashMap<&NodeId, NodeLabel> = HashMap::new();
        for n in &nodes {
            partition_key(n.label, &n.props)?;
            if let Some(existing) = self.nodes.get(&n.id) {
                if existing.label != n.label {
                    return Err(StoreError::LabelMismatch {
                        id: n.id.clone(),
                        existing: existing.label,
                        attempted: n.label,
                    });
                }
            }
            staged_labels.insert(&n.id, n.label);
        }

        let commit = &bundle.commit.id;
        let mut edges: Vec<Edge> = Vec::new();
        let t = Instant::now();
        edges.push(Edge::new(EdgeLabel::Author, &bundle.developer.id, commit));
        timed(InsertClass::Edge(EdgeLabel::Author), t);
        let t = Instant::now();
        for parent in &bundle.parents {
            let pid = node_id(NodeLabel::Commit, &[project.as_str(), parent])?;
            // Parents outside the drilled range have no node; the edge is
            // only recorded once both commits are present.
            if self.nodes.get(&pid).is_some_and(|r| r.label == NodeLabel::Commit) {
                edges.push(Edge::new(EdgeLabel::Parent, commit, &pid));
            }
        }
        timed(InsertClass::Edge(EdgeLabel::Parent), t);
        let t = Instant::now();
        for b in &bundle.branches {
            edges.push(Edge::new(EdgeLabel::InBranch, commit, &b.id));
        }
        timed(InsertClass::Edge(EdgeLabel::InBranch), t);
        let t = Instant::now();
        for fc in &bundle.file_changes {
            edges.push(Edge::new(EdgeLabel::UpdateFile, commit, &fc.file.id).with_props(fc.update.props()));
        }
        timed(InsertClass::Edge(EdgeLabel::UpdateFile), t);
        let t = Instant::now();
        for mc in &bundle.method_changes {
            edges.push(Edge::new(EdgeLabel::HasMethod, &mc.method.file_id, &mc.method.id));
        }
        timed(InsertClass::Edge(EdgeLabel::HasMethod), t);
        let t = Instant::now();
        for mc in &bundle.method_changes {
            edges.push(
                Edge::new(EdgeLabel::UpdateMethod, commit, &mc.method.id).with_props(mc.update.props()),
            );
        }
        timed(InsertClass::Edge(EdgeLabel::UpdateMethod), t);

        for e in &edges {
            let (want_src, want_dst) = e.label.endpoints();
            for (id, want) in [(&e.src, want_src), (&e.dst, want_dst)] {
                let found = staged_labels
                    .get(id)
                    .copied()
                    .or_else(|| self.nodes.get(id).map(|r| r.label))
                    .ok_or_else(|| StoreError::MissingEndpoint { label: e.label, id: id.clone() })?;
                if found != want {
                    let label_of = |x: &NodeId| {
                        staged_labels.get(x).copied().or_else(|| self.nodes.get(x).map(|r| r.label))
                    };
                    return Err(StoreError::EndpointLabel {
                        label: e.label,
                        expected_src: want_src,
                        expected_dst: want_dst,
                        src: label_of(&e.src).unwrap_or(want_src),
                        dst: label_of(&e.dst).unwrap_or(want_dst),
                    });
                }
            }
        }

        let mut aliases = Vec::new();
        for fc in &bundle.file_changes {
            for path in [
                Some(fc.file.first_seen_path.as_str()),
                fc.update.old_path.as_deref(),
                fc.update.new_path.as_deref(),
            ]
            .into_iter()
            .flatten()
            {
                aliases.push((project.clone(), path.to_owned(), fc.file.id.clone()));
            }
        }

        Ok(Staged { nodes, edges, aliases, timings })
    }

    fn apply(&mut self, staged: Staged) -> InsertOutcome {
        let mut out = InsertOutcome::empty();
        let Staged { nodes, edges, aliases, timings } = staged;
        out.timings.extend(timings);

        let mut by_label: BTreeMap<NodeLabel, Vec<Node>> = BTreeMap::new();
        for n in nodes {
            by_label.entry(n.label).or_default().push(n);
        }
        for (label, group) in by_label {
            let class = InsertClass::Node(label);
            let start = Instant::now();
            for n in group {
                let outcome = self.upsert_node(n).expect("staged node must upsert");
                out.counts.entry(class).or_default().record(outcome);
            }
            if label == NodeLabel::File {
                for (project, path, id) in &aliases {
                    self.register_path(project, path, id);
                }
            }
            *out.timings.entry(class).or_default() += start.elapsed();
        }

        let mut by_label: BTreeMap<EdgeLabel, Vec<Edge>> = BTreeMap::new();
        for e in edges {
            by_label.entry(e.label).or_default().push(e);
        }
        for (label, group) in by_label {
            let class = InsertClass::Edge(label);
            let start = Instant::now();
            for e in group {
                let outcome = self.upsert_edge(e).expect("staged edge must upsert");
                out.counts.entry(class).or_default().record(outcome);
            }
            *out.timings.entry(class).or_default() += start.elapsed();
        }
        out
    }

    /// Full-scan consistency check of every store invariant.
    pub fn check_integrity(&self) -> Result<(), String> {
        let mut partitioned = 0usize;
        for (label, parts) in &self.label_index {
            for (key, ids) in parts {
                for id in ids {
                    let rec = self.nodes.get(id).ok_or(format!("indexed node {id} missing"))?;
                    if rec.label != *label {
                        return Err(format!("node {id} indexed under {label}, is {}", rec.label));
                    }
                    let want = partition_key(rec.label, &rec.props).map_err(|e| e.to_string())?;
                    if &want != key {
                        return Err(format!("node {id} indexed under project `{key}`"));
                    }
                    partitioned += 1;
                }
            }
        }
        if partitioned != self.nodes.len() {
            return Err(format!("label index covers {partitioned} of {} nodes", self.nodes.len()));
        }
        for (key, _) in &self.edges {
            let edge = Edge::new(key.label, &key.src, &key.dst);
            self.check_edge(&edge).map_err(|e| e.to_string())?;
            let outs = self.neighbor_ids(&key.src, key.label, Direction::Out);
            let ins = self.neighbor_ids(&key.dst, key.label, Direction::In);
            if outs.iter().filter(|d| **d == key.dst).count() != 1
                || ins.iter().filter(|s| **s == key.src).count() != 1
            {
                return Err(format!("adjacency mismatch for {} {} -> {}", key.label, key.src, key.dst));
            }
        }
        let out_total: usize = self.out_adj.values().map(Vec::len).sum();
        let in_total: usize = self.in_adj.values().map(Vec::len).sum();
        if out_total != self.edges.len() || in_total != self.edges.len() {
            return Err(format!(
                "adjacency sizes out={out_total} in={in_total} edges={}",
                self.edges.len()
            ));
        }
        for ((project, path), id) in &self.path_alias {
            let rec = self.nodes.get(id).ok_or(format!("alias {path} points at missing {id}"))?;
            if rec.label != NodeLabel::File || rec.project() != Some(project.as_str()) {
                return Err(format!("alias {project}:{path} does not point at a file of its project"));
            }
        }
        Ok(())
    }
}

struct Staged {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    aliases: Vec<(ProjectId, String, NodeId)>,
    timings: BTreeMap<InsertClass, Duration>,
}
