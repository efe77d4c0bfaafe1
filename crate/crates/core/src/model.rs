//! Graph schema: node and edge labels, property values, and content-derived
//! identities.
//!
//! Every node id is the SHA-1 hex digest of `"<Label>|<part>|<part>..."`.
//! Developers are keyed by lowercased email alone so that one person working
//! on several projects maps to a single node; every other label is scoped by
//! its project id.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha1::{Digest, Sha1};

use crate::error::ModelError;

const MAX_PROJECT_ID_LEN: usize = 128;

/// Identifier shared by every node extracted from one repository configuration.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ProjectId(String);

impl ProjectId {
    pub fn new(value: impl Into<String>) -> Result<Self, ModelError> {
        let value = value.into();
        if value.is_empty() {
            return Err(ModelError::InvalidProjectId("empty".into()));
        }
        if value.contains('|') {
            return Err(ModelError::InvalidProjectId(format!("`{value}` contains `|`")));
        }
        if value.len() > MAX_PROJECT_ID_LEN {
            return Err(ModelError::InvalidProjectId(format!(
                "{} bytes exceeds the {MAX_PROJECT_ID_LEN} byte limit",
                value.len()
            )));
        }
        Ok(Self(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ProjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for ProjectId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(s)
    }
}

impl<'de> Deserialize<'de> for ProjectId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        Self::new(raw).map_err(serde::de::Error::custom)
    }
}

/// 40-character lowercase hex SHA-1 of a node's canonical identity string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(Arc<str>);

impl NodeId {
    /// Parses an already computed id, checking the 40-hex shape.
    pub fn parse(value: &str) -> Result<Self, ModelError> {
        if value.len() == 40 && value.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f')) {
            Ok(Self(Arc::from(value)))
        } else {
            Err(ModelError::InvalidNodeId(value.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NodeId({})", self.0)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for NodeId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for NodeId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        Self::parse(&raw).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeLabel {
    Branch,
    Commit,
    Developer,
    File,
    Method,
}

impl NodeLabel {
    pub const ALL: [NodeLabel; 5] = [
        NodeLabel::Branch,
        NodeLabel::Commit,
        NodeLabel::Developer,
        NodeLabel::File,
        NodeLabel::Method,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeLabel::Branch => "Branch",
            NodeLabel::Commit => "Commit",
            NodeLabel::Developer => "Developer",
            NodeLabel::File => "File",
            NodeLabel::Method => "Method",
        }
    }

    /// Developers are shared across projects; everything else is project scoped.
    pub fn is_project_scoped(self) -> bool {
        self != NodeLabel::Developer
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NodeLabel {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NodeLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| ModelError::UnknownLabel(s.to_owned()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeLabel {
    Author,
    HasMethod,
    InBranch,
    Parent,
    UpdateFile,
    UpdateMethod,
}

impl EdgeLabel {
    pub const ALL: [EdgeLabel; 6] = [
        EdgeLabel::Author,
        EdgeLabel::HasMethod,
        EdgeLabel::InBranch,
        EdgeLabel::Parent,
        EdgeLabel::UpdateFile,
        EdgeLabel::UpdateMethod,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeLabel::Author => "Author",
            EdgeLabel::HasMethod => "HasMethod",
            EdgeLabel::InBranch => "InBranch",
            EdgeLabel::Parent => "Parent",
            EdgeLabel::UpdateFile => "UpdateFile",
            EdgeLabel::UpdateMethod => "UpdateMethod",
        }
    }

    /// Required `(source, destination)` node labels.
    pub fn endpoints(self) -> (NodeLabel, NodeLabel) {
        match self {
            EdgeLabel::Author => (NodeLabel::Developer, NodeLabel::Commit),
            EdgeLabel::Parent => (NodeLabel::Commit, NodeLabel::Commit),
            EdgeLabel::InBranch => (NodeLabel::Commit, NodeLabel::Branch),
            EdgeLabel::HasMethod => (NodeLabel::File, NodeLabel::Method),
            EdgeLabel::UpdateFile => (NodeLabel::Commit, NodeLabel::File),
            EdgeLabel::UpdateMethod => (NodeLabel::Commit, NodeLabel::Method),
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EdgeLabel {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EdgeLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| ModelError::UnknownLabel(s.to_owned()))
    }
}

/// Scalar property value. Diffs and source text are plain strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
}

impl Value {
    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

/// Property map; keys are kept sorted so serialization is canonical.
pub type Props = BTreeMap<String, Value>;

/// Computes the SHA-1 identity of a node from its label and identity parts.
pub fn node_id(kind: NodeLabel, parts: &[&str]) -> Result<NodeId, ModelError> {
    if parts.is_empty() {
        return Err(ModelError::Identity(format!("{kind} identity needs at least one part")));
    }
    if let Some(pos) = parts.iter().position(|p| p.is_empty()) {
        return Err(ModelError::Identity(format!("{kind} identity part {pos} is empty")));
    }
    let mut hasher = Sha1::new();
    hasher.update(kind.as_str().as_bytes());
    for part in parts {
        hasher.update(b"|");
        hasher.update(part.as_bytes());
    }
    Ok(NodeId(Arc::from(hex::encode(hasher.finalize()))))
}

/// Lowercase extension of the final path segment, or `"unknown"`.
pub fn file_type_of(path: &str) -> String {
    let segment = path.rsplit('/').next().unwrap_or(path);
    match segment.rfind('.') {
        Some(0) | None => "unknown".to_owned(),
        Some(i) if i + 1 == segment.len() => "unknown".to_owned(),
        Some(i) => segment[i + 1..].to_lowercase(),
    }
}

/// Developer identity email: lowercased, or synthesized from the name when
/// the commit carries no email.
pub fn developer_email(name: &str, email: &str) -> String {
    let email = email.trim();
    if !email.is_empty() {
        return email.to_lowercase();
    }
    let local = name.trim().to_lowercase().replace(' ', ".");
    if local.is_empty() {
        "unknown@unknown".to_owned()
    } else {
        format!("unknown@{local}")
    }
}

fn props_get_str<'a>(props: &'a Props, key: &str) -> Result<&'a str, ModelError> {
    props
        .get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| ModelError::MissingProperty(key.to_owned()))
}

fn props_get_int(props: &Props, key: &str) -> Result<i64, ModelError> {
    props
        .get(key)
        .and_then(Value::as_int)
        .ok_or_else(|| ModelError::MissingProperty(key.to_owned()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeveloperNode {
    pub id: NodeId,
    pub name: String,
    pub email: String,
}

impl DeveloperNode {
    pub fn new(name: &str, raw_email: &str) -> Result<Self, ModelError> {
        let email = developer_email(name, raw_email);
        Ok(Self {
            id: node_id(NodeLabel::Developer, &[&email])?,
            name: name.to_owned(),
            email,
        })
    }

    pub fn props(&self) -> Props {
        let mut p = Props::new();
        p.insert("email".into(), self.email.as_str().into());
        p.insert("name".into(), self.name.as_str().into());
        p
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitNode {
    pub id: NodeId,
    pub project_id: ProjectId,
    pub sha: String,
    pub message: String,
    pub timestamp: i64,
    pub tz_offset_minutes: i32,
    pub is_merge: bool,
}

impl CommitNode {
    pub fn new(
        project_id: &ProjectId,
        sha: &str,
        message: &str,
        timestamp: i64,
        tz_offset_minutes: i32,
        parent_count: usize,
    ) -> Result<Self, ModelError> {
        Ok(Self {
            id: node_id(NodeLabel::Commit, &[project_id.as_str(), sha])?,
            project_id: project_id.clone(),
            sha: sha.to_owned(),
            message: message.to_owned(),
            timestamp,
            tz_offset_minutes,
            is_merge: parent_count >= 2,
        })
    }

    pub fn props(&self) -> Props {
        let mut p = Props::new();
        p.insert("is_merge".into(), self.is_merge.into());
        p.insert("message".into(), self.message.as_str().into());
        p.insert("project_id".into(), self.project_id.as_str().into());
        p.insert("sha".into(), self.sha.as_str().into());
        p.insert("timestamp".into(), self.timestamp.into());
        p.insert("tz_offset_minutes".into(), i64::from(self.tz_offset_minutes).into());
        p
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchNode {
    pub id: NodeId,
    pub project_id: ProjectId,
    pub name: String,
}

impl BranchNode {
    pub fn new(project_id: &ProjectId, name: &str) -> Result<Self, ModelError> {
        Ok(Self {
            id: node_id(NodeLabel::Branch, &[project_id.as_str(), name])?,
            project_id: project_id.clone(),
            name: name.to_owned(),
        })
    }

    pub fn props(&self) -> Props {
        let mut p = Props::new();
        p.insert("name".into(), self.name.as_str().into());
        p.insert("project_id".into(), self.project_id.as_str().into());
        p
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileNode {
    pub id: NodeId,
    pub project_id: ProjectId,
    pub first_seen_path: String,
    pub current_path: String,
    pub file_type: String,
}

impl FileNode {
    pub fn new(project_id: &ProjectId, first_seen_path: &str) -> Result<Self, ModelError> {
        Ok(Self {
            id: node_id(NodeLabel::File, &[project_id.as_str(), first_seen_path])?,
            project_id: project_id.clone(),
            first_seen_path: first_seen_path.to_owned(),
            current_path: first_seen_path.to_owned(),
            file_type: file_type_of(first_seen_path),
        })
    }

    /// Moves the file to `path`, keeping its identity.
    pub fn with_current_path(mut self, path: &str) -> Self {
        self.current_path = path.to_owned();
        self.file_type = file_type_of(path);
        self
    }

    pub fn props(&self) -> Props {
        let mut p = Props::new();
        p.insert("current_path".into(), self.current_path.as_str().into());
        p.insert("file_type".into(), self.file_type.as_str().into());
        p.insert("first_seen_path".into(), self.first_seen_path.as_str().into());
        p.insert("project_id".into(), self.project_id.as_str().into());
        p
    }

    pub fn from_props(id: NodeId, props: &Props) -> Result<Self, ModelError> {
        Ok(Self {
            id,
            project_id: ProjectId::new(props_get_str(props, "project_id")?)?,
            first_seen_path: props_get_str(props, "first_seen_path")?.to_owned(),
            current_path: props_get_str(props, "current_path")?.to_owned(),
            file_type: props_get_str(props, "file_type")?.to_owned(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodNode {
    pub id: NodeId,
    pub project_id: ProjectId,
    pub file_id: NodeId,
    pub name: String,
    pub long_name: String,
}

impl MethodNode {
    pub fn new(
        project_id: &ProjectId,
        file_id: &NodeId,
        name: &str,
        long_name: &str,
    ) -> Result<Self, ModelError> {
        Ok(Self {
            id: node_id(
                NodeLabel::Method,
                &[project_id.as_str(), file_id.as_str(), long_name],
            )?,
            project_id: project_id.clone(),
            file_id: file_id.clone(),
            name: name.to_owned(),
            long_name: long_name.to_owned(),
        })
    }

    pub fn props(&self) -> Props {
        let mut p = Props::new();
        p.insert("file_id".into(), self.file_id.as_str().into());
        p.insert("long_name".into(), self.long_name.as_str().into());
        p.insert("name".into(), self.name.as_str().into());
        p.insert("project_id".into(), self.project_id.as_str().into());
        p
    }

    pub fn from_props(id: NodeId, props: &Props) -> Result<Self, ModelError> {
        Ok(Self {
            id,
            project_id: ProjectId::new(props_get_str(props, "project_id")?)?,
            file_id: NodeId::parse(props_get_str(props, "file_id")?)?,
            name: props_get_str(props, "name")?.to_owned(),
            long_name: props_get_str(props, "long_name")?.to_owned(),
        })
    }
}

/// A labeled node ready for insertion.
#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub label: NodeLabel,
    pub props: Props,
}

impl From<&DeveloperNode> for Node {
    fn from(n: &DeveloperNode) -> Self {
        Node { id: n.id.clone(), label: NodeLabel::Developer, props: n.props() }
    }
}

impl From<&CommitNode> for Node {
    fn from(n: &CommitNode) -> Self {
        Node { id: n.id.clone(), label: NodeLabel::Commit, props: n.props() }
    }
}

impl From<&BranchNode> for Node {
    fn from(n: &BranchNode) -> Self {
        Node { id: n.id.clone(), label: NodeLabel::Branch, props: n.props() }
    }
}

impl From<&FileNode> for Node {
    fn from(n: &FileNode) -> Self {
        Node { id: n.id.clone(), label: NodeLabel::File, props: n.props() }
    }
}

impl From<&MethodNode> for Node {
    fn from(n: &MethodNode) -> Self {
        Node { id: n.id.clone(), label: NodeLabel::Method, props: n.props() }
    }
}

/// Directed, labeled relationship. At most one edge exists per
/// `(label, src, dst)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub label: EdgeLabel,
    pub src: NodeId,
    pub dst: NodeId,
    pub props: Props,
}

impl Edge {
    pub fn new(label: EdgeLabel, src: &NodeId, dst: &NodeId) -> Self {
        Self { label, src: src.clone(), dst: dst.clone(), props: Props::new() }
    }

    pub fn with_props(mut self, props: Props) -> Self {
        self.props = props;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ChangeType {
    Add,
    Modify,
    Delete,
    Rename,
}

impl ChangeType {
    pub fn as_str(self) -> &'static str {
        match self {
            ChangeType::Add => "ADD",
            ChangeType::Modify => "MODIFY",
            ChangeType::Delete => "DELETE",
            ChangeType::Rename => "RENAME",
        }
    }
}

/// Metadata carried by an `UpdateFile` edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateFileProps {
    pub change_type: ChangeType,
    pub old_path: Option<String>,
    pub new_path: Option<String>,
    pub diff: String,
    pub source_before: Option<String>,
    pub source_after: Option<String>,
    pub nloc: u64,
    pub added_lines: u64,
    pub removed_lines: u64,
    pub timestamp: i64,
}

impl UpdateFileProps {
    /// Path of the file before the change, falling back to the new path for
    /// additions.
    pub fn path_before(&self) -> &str {
        self.old_path.as_deref().or(self.new_path.as_deref()).unwrap_or_default()
    }

    /// Path of the file after the change, falling back to the old path for
    /// deletions.
    pub fn path_after(&self) -> &str {
        self.new_path.as_deref().or(self.old_path.as_deref()).unwrap_or_default()
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let ok = match self.change_type {
            ChangeType::Add => self.new_path.is_some(),
            ChangeType::Delete => self.old_path.is_some(),
            ChangeType::Modify => self.old_path.is_some() && self.new_path.is_some(),
            ChangeType::Rename => matches!(
                (&self.old_path, &self.new_path),
                (Some(a), Some(b)) if a != b
            ),
        };
        if ok {
            Ok(())
        } else {
            Err(ModelError::InvalidChange(format!(
                "{} with old_path={:?} new_path={:?}",
                self.change_type.as_str(),
                self.old_path,
                self.new_path
            )))
        }
    }

    pub fn props(&self) -> Props {
        let mut p = Props::new();
        p.insert("added_lines".into(), (self.added_lines as i64).into());
        p.insert("change_type".into(), self.change_type.as_str().into());
        p.insert("diff".into(), self.diff.as_str().into());
        p.insert("nloc".into(), (self.nloc as i64).into());
        if let Some(v) = &self.new_path {
            p.insert("new_path".into(), v.as_str().into());
        }
        if let Some(v) = &self.old_path {
            p.insert("old_path".into(), v.as_str().into());
        }
        p.insert("removed_lines".into(), (self.removed_lines as i64).into());
        if let Some(v) = &self.source_after {
            p.insert("source_after".into(), v.as_str().into());
        }
        if let Some(v) = &self.source_before {
            p.insert("source_before".into(), v.as_str().into());
        }
        p.insert("timestamp".into(), self.timestamp.into());
        p
    }
}

/// Per-function metrics carried by an `UpdateMethod` edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UpdateMethodProps {
    pub complexity: u32,
    pub nloc: u32,
    pub token_count: u32,
    pub parameter_count: u32,
    pub timestamp: i64,
}

impl UpdateMethodProps {
    pub fn props(&self) -> Props {
        let mut p = Props::new();
        p.insert("complexity".into(), i64::from(self.complexity).into());
        p.insert("nloc".into(), i64::from(self.nloc).into());
        p.insert("parameter_count".into(), i64::from(self.parameter_count).into());
        p.insert("timestamp".into(), self.timestamp.into());
        p.insert("token_count".into(), i64::from(self.token_count).into());
        p
    }

    pub fn from_props(props: &Props) -> Result<Self, ModelError> {
        let int = |k: &str| -> Result<u32, ModelError> {
            u32::try_from(props_get_int(props, k)?)
                .map_err(|_| ModelError::MissingProperty(k.to_owned()))
        };
        Ok(Self {
            complexity: int("complexity")?,
            nloc: int("nloc")?,
            token_count: int("token_count")?,
            parameter_count: int("parameter_count")?,
            timestamp: props_get_int(props, "timestamp")?,
        })
    }
}
