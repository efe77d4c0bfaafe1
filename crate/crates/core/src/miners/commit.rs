use crate::error::QueryError;
use crate::model::{node_id, EdgeLabel, NodeId, NodeLabel};
use crate::store::Direction;

use super::{Column, QueryResult, Scalar, ScalarType, Scope};

/// Commit queries. Branches have no miner of their own; they appear here as
/// a filter.
pub struct CommitMiner<'s> {
    scope: Scope<'s>,
}

impl<'s> CommitMiner<'s> {
    pub(crate) fn new(scope: Scope<'s>) -> Self {
        Self { scope }
    }

    /// Branch names of the project, sorted.
    pub fn branches(&self) -> Vec<String> {
        let store = self.scope.store;
        let mut names: Vec<String> = store
            .nodes_by_label(NodeLabel::Branch, Some(&self.scope.project))
            .iter()
            .filter_map(|b| store.node(b)?.str_prop("name").map(str::to_owned))
            .collect();
        names.sort();
        names
    }

    /// `(sha, timestamp, author_email, is_merge)` for the project's commits,
    /// optionally only those on `branch`, ordered by timestamp then sha.
    pub fn commits(&self, branch: Option<&str>) -> Result<QueryResult, QueryError> {
        let store = self.scope.store;
        let ids: Vec<NodeId> = match branch {
            None => store.nodes_by_label(NodeLabel::Commit, Some(&self.scope.project)),
            Some(name) => {
                let bid = node_id(NodeLabel::Branch, &[self.scope.project.as_str(), name])?;
                if !store.contains(&bid) {
                    return Err(QueryError::NotFound(format!("branch `{name}`")));
                }
                store.neighbor_ids(&bid, EdgeLabel::InBranch, Direction::In).to_vec()
            }
        };
        let mut rows: Vec<(i64, String, String, bool)> = ids
            .iter()
            .filter_map(|c| {
                let rec = store.node(c)?;
                let email = store
                    .neighbor_ids(c, EdgeLabel::Author, Direction::In)
                    .first()
                    .and_then(|d| store.node(d))
                    .and_then(|d| d.str_prop("email"))
                    .unwrap_or_default()
                    .to_owned();
                Some((
                    rec.int_prop("timestamp")?,
                    rec.str_prop("sha")?.to_owned(),
                    email,
                    rec.props.get("is_merge").and_then(|v| v.as_bool()).unwrap_or(false),
                ))
            })
            .collect();
        rows.sort();
        let mut out = QueryResult::new(vec![
            Column::new("sha", ScalarType::Str),
            Column::new("timestamp", ScalarType::Int),
            Column::new("author_email", ScalarType::Str),
            Column::new("is_merge", ScalarType::Bool),
        ]);
        for (ts, sha, email, merge) in rows {
            out.push_row(vec![Scalar::Str(sha), Scalar::Int(ts), Scalar::Str(email), Scalar::Bool(merge)]);
        }
        Ok(out)
    }

    /// Parent shas of a commit that are present in the store.
    pub fn parents(&self, sha: &str) -> Result<Vec<String>, QueryError> {
        let store = self.scope.store;
        let id = node_id(NodeLabel::Commit, &[self.scope.project.as_str(), sha])?;
        let parents = store
            .neighbors(&id, EdgeLabel::Parent, Direction::Out)
            .map_err(|_| QueryError::NotFound(format!("commit {sha}")))?;
        Ok(parents
            .iter()
            .filter_map(|(p, _)| store.node(p)?.str_prop("sha").map(str::to_owned))
            .collect())
    }
}
