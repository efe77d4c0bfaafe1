//! Rewrites the naive file identities of an extracted bundle to the files'
//! real identities, so renamed files keep one node across their history.

use std::collections::HashMap;

use grepo_core::{CommitBundle, FileNode, GraphStore, MethodNode, ModelError, NodeId, ProjectId};

/// Path to file lookup for one drilling run. Paths touched in this run win;
/// otherwise the store's alias index answers; otherwise the path is new.
pub struct FileResolver {
    project: ProjectId,
    by_path: HashMap<String, FileNode>,
}

impl FileResolver {
    pub fn new(project: ProjectId) -> Self {
        Self { project, by_path: HashMap::new() }
    }

    fn lookup(&self, store: &GraphStore, path: &str) -> Result<FileNode, ModelError> {
        if let Some(f) = self.by_path.get(path) {
            return Ok(f.clone());
        }
        if let Some(f) = store.resolve_path(&self.project, path) {
            return Ok(f);
        }
        FileNode::new(&self.project, path)
    }

    /// Binds every file change of `bundle` in order and repoints its method
    /// changes at the bound files.
    pub fn bind(&mut self, store: &GraphStore, bundle: &mut CommitBundle) -> Result<(), ModelError> {
        let mut rebound: HashMap<NodeId, FileNode> = HashMap::new();
        for fc in &mut bundle.file_changes {
            let before = fc.update.path_before().to_owned();
            let after = fc.update.path_after().to_owned();
            let file = self.lookup(store, &before)?.with_current_path(&after);
            self.by_path.insert(after, file.clone());
            rebound.insert(fc.file.id.clone(), file.clone());
            fc.file = file;
        }
        for mc in &mut bundle.method_changes {
            let Some(file) = rebound.get(&mc.file.id) else { continue };
            mc.method = MethodNode::new(&self.project, &file.id, &mc.method.name, &mc.method.long_name)?;
            mc.file = file.clone();
        }
        Ok(())
    }
}
