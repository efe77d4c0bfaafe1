//! The unit of caching and batching: everything extracted from one commit.

use serde::{Deserialize, Serialize};

use crate::model::{
    BranchNode, CommitNode, DeveloperNode, FileNode, MethodNode, UpdateFileProps,
    UpdateMethodProps,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileChange {
    pub file: FileNode,
    pub update: UpdateFileProps,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodChange {
    pub method: MethodNode,
    pub update: UpdateMethodProps,
    /// The file that owns the method, as of this commit.
    pub file: FileNode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitBundle {
    pub commit: CommitNode,
    pub developer: DeveloperNode,
    pub branches: Vec<BranchNode>,
    /// Parent commit shas, first parent first.
    pub parents: Vec<String>,
    pub file_changes: Vec<FileChange>,
    pub method_changes: Vec<MethodChange>,
}

impl CommitBundle {
    pub fn node_count(&self) -> usize {
        2 + self.branches.len() + self.file_changes.len() + self.method_changes.len()
    }
}
