use crate::error::QueryError;
use crate::model::{EdgeLabel, MethodNode, NodeId};
use crate::store::Direction;

use super::file::FileMiner;
use super::{Column, QueryResult, Scalar, ScalarType, Scope};

/// How Q3 walks the graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Q3Mode {
    /// List the file's methods, then fetch each method's history in its own
    /// store round trip.
    Iterative,
    /// One traversal `File -HasMethod-> Method <-UpdateMethod- Commit`.
    SinglePass,
}

pub struct MethodMiner<'s> {
    scope: Scope<'s>,
}

type HistoryRow = (i64, String, i64);

impl<'s> MethodMiner<'s> {
    pub(crate) fn new(scope: Scope<'s>) -> Self {
        Self { scope }
    }

    fn history_rows(&self, method: &NodeId) -> Vec<HistoryRow> {
        let store = self.scope.store;
        let mut rows: Vec<HistoryRow> = store
            .neighbor_ids(method, EdgeLabel::UpdateMethod, Direction::In)
            .iter()
            .filter_map(|commit| {
                let props = store.edge_props(EdgeLabel::UpdateMethod, commit, method)?;
                let sha = store.node(commit)?.str_prop("sha")?.to_owned();
                Some((props.get("timestamp")?.as_int()?, sha, props.get("complexity")?.as_int()?))
            })
            .collect();
        rows.sort();
        rows
    }

    /// `(commit_sha, timestamp, complexity)` for every update of the method,
    /// ordered by timestamp then sha.
    pub fn method_update_history(&self, method: &NodeId) -> Result<QueryResult, QueryError> {
        self.scope.resolve_method(method)?;
        self.scope.count_update_method_traversal();
        let mut out = QueryResult::new(vec![
            Column::new("commit_sha", ScalarType::Str),
            Column::new("timestamp", ScalarType::Int),
            Column::new("complexity", ScalarType::Int),
        ]);
        for (ts, sha, ccn) in self.history_rows(method) {
            out.push_row(vec![Scalar::Str(sha), Scalar::Int(ts), Scalar::Int(ccn)]);
        }
        Ok(out)
    }

    /// Q3: complexity history of every method in a file, as
    /// `(method_long_name, commit_sha, timestamp, complexity)`. Methods are
    /// ordered by long name then id, each history by timestamp then sha. Both
    /// modes return the same rows.
    pub fn q3_file_complexity(&self, file: &str, mode: Q3Mode) -> Result<QueryResult, QueryError> {
        let files = FileMiner::new(self.scope.clone());
        let file_id = files.resolve(file)?;
        let mut out = QueryResult::new(vec![
            Column::new("method_long_name", ScalarType::Str),
            Column::new("commit_sha", ScalarType::Str),
            Column::new("timestamp", ScalarType::Int),
            Column::new("complexity", ScalarType::Int),
        ]);
        match mode {
            Q3Mode::Iterative => {
                for method in files.methods_of(&file_id)? {
                    let history = self.method_update_history(&method.id)?;
                    for row in history.rows {
                        let mut full = vec![Scalar::Str(method.long_name.clone())];
                        full.extend(row);
                        out.push_row(full);
                    }
                }
            }
            Q3Mode::SinglePass => {
                self.scope.count_update_method_traversal();
                let store = self.scope.store;
                let mut rows: Vec<(String, NodeId, HistoryRow)> = Vec::new();
                for m in store.neighbor_ids(&file_id, EdgeLabel::HasMethod, Direction::Out) {
                    let rec = self.scope.resolve_method(m)?;
                    let long_name = rec.str_prop("long_name").unwrap_or_default();
                    for commit in store.neighbor_ids(m, EdgeLabel::UpdateMethod, Direction::In) {
                        let Some(props) = store.edge_props(EdgeLabel::UpdateMethod, commit, m) else {
                            continue;
                        };
                        let (Some(ts), Some(ccn), Some(sha)) = (
                            props.get("timestamp").and_then(|v| v.as_int()),
                            props.get("complexity").and_then(|v| v.as_int()),
                            store.node(commit).and_then(|c| c.str_prop("sha")),
                        ) else {
                            continue;
                        };
                        rows.push((long_name.to_owned(), m.clone(), (ts, sha.to_owned(), ccn)));
                    }
                }
                rows.sort();
                for (long_name, _, (ts, sha, ccn)) in rows {
                    out.push_row(vec![
                        Scalar::Str(long_name),
                        Scalar::Str(sha),
                        Scalar::Int(ts),
                        Scalar::Int(ccn),
                    ]);
                }
            }
        }
        Ok(out)
    }

    /// Every method of the project, ordered by file id then long name.
    pub fn all_methods(&self) -> Vec<MethodNode> {
        let store = self.scope.store;
        let mut methods: Vec<MethodNode> = store
            .nodes_by_label(crate::model::NodeLabel::Method, Some(&self.scope.project))
            .into_iter()
            .filter_map(|id| {
                let rec = store.node(&id)?;
                MethodNode::from_props(id, &rec.props).ok()
            })
            .collect();
        methods.sort_by(|a, b| (&a.file_id, &a.long_name).cmp(&(&b.file_id, &b.long_name)));
        methods
    }
}
