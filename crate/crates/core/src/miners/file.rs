use crate::error::QueryError;
use crate::model::{EdgeLabel, MethodNode, NodeId, NodeLabel};
use crate::store::Direction;

use super::{Column, QueryResult, Scalar, ScalarType, Scope, WorstCase};

pub struct FileMiner<'s> {
    scope: Scope<'s>,
}

impl<'s> FileMiner<'s> {
    pub(crate) fn new(scope: Scope<'s>) -> Self {
        Self { scope }
    }

    /// Resolves a path (current or historical) or a file node id.
    pub fn resolve(&self, file: &str) -> Result<NodeId, QueryError> {
        self.scope.resolve_file(file)
    }

    /// Q2: `(commit_sha, timestamp, nloc)` for every update of the file,
    /// ordered by timestamp then sha.
    pub fn file_update_history(&self, file: &str) -> Result<QueryResult, QueryError> {
        let id = self.resolve(file)?;
        let store = self.scope.store;
        let mut rows: Vec<(i64, String, i64)> = store
            .neighbor_ids(&id, EdgeLabel::UpdateFile, Direction::In)
            .iter()
            .filter_map(|commit| {
                let props = store.edge_props(EdgeLabel::UpdateFile, commit, &id)?;
                let sha = store.node(commit)?.str_prop("sha")?.to_owned();
                let ts = props.get("timestamp")?.as_int()?;
                let nloc = props.get("nloc")?.as_int()?;
                Some((ts, sha, nloc))
            })
            .collect();
        rows.sort();

        let mut out = QueryResult::new(vec![
            Column::new("commit_sha", ScalarType::Str),
            Column::new("timestamp", ScalarType::Int),
            Column::new("nloc", ScalarType::Int),
        ]);
        for (ts, sha, nloc) in rows {
            out.push_row(vec![Scalar::Str(sha), Scalar::Int(ts), Scalar::Int(nloc)]);
        }
        Ok(out)
    }

    /// Methods reached through `HasMethod`, ordered by long name then id.
    pub fn file_methods(&self, file: &str) -> Result<Vec<MethodNode>, QueryError> {
        let id = self.resolve(file)?;
        self.methods_of(&id)
    }

    pub(crate) fn methods_of(&self, file: &NodeId) -> Result<Vec<MethodNode>, QueryError> {
        let store = self.scope.store;
        let mut methods = store
            .neighbor_ids(file, EdgeLabel::HasMethod, Direction::Out)
            .iter()
            .map(|m| {
                let rec = self.scope.resolve_method(m)?;
                Ok(MethodNode::from_props(m.clone(), &rec.props)?)
            })
            .collect::<Result<Vec<_>, QueryError>>()?;
        methods.sort_by(|a, b| (&a.long_name, &a.id).cmp(&(&b.long_name, &b.id)));
        Ok(methods)
    }

    /// Every file of the project with its number of updates.
    pub(crate) fn update_degrees(&self) -> Vec<WorstCase> {
        let store = self.scope.store;
        store
            .nodes_by_label(NodeLabel::File, Some(&self.scope.project))
            .into_iter()
            .map(|f| {
                let n = store.neighbor_ids(&f, EdgeLabel::UpdateFile, Direction::In).len() as u64;
                WorstCase { target: f, degree: n, workload: n }
            })
            .collect()
    }

    /// Every file with the total method updates over its methods; workload is
    /// its method count.
    pub(crate) fn method_update_degrees(&self) -> Vec<WorstCase> {
        let store = self.scope.store;
        store
            .nodes_by_label(NodeLabel::File, Some(&self.scope.project))
            .into_iter()
            .map(|f| {
                let methods = store.neighbor_ids(&f, EdgeLabel::HasMethod, Direction::Out);
                let updates: usize = methods
                    .iter()
                    .map(|m| store.neighbor_ids(m, EdgeLabel::UpdateMethod, Direction::In).len())
                    .sum();
                WorstCase { target: f, degree: updates as u64, workload: methods.len() as u64 }
            })
            .collect()
    }
}
