use std::collections::{BTreeMap, BTreeSet};

use crate::error::QueryError;
use crate::model::{DeveloperNode, EdgeLabel, NodeId};
use crate::store::Direction;

use super::{Column, QueryResult, Scalar, ScalarType, Scope, WorstCase};

pub struct DeveloperMiner<'s> {
    scope: Scope<'s>,
}

impl<'s> DeveloperMiner<'s> {
    pub(crate) fn new(scope: Scope<'s>) -> Self {
        Self { scope }
    }

    /// Accepts an email (any case) or a developer node id.
    pub fn resolve(&self, dev: &str) -> Result<NodeId, QueryError> {
        self.scope.resolve_developer(dev)
    }

    /// Developers who authored at least one commit of the project.
    pub fn developers(&self) -> Vec<DeveloperNode> {
        let store = self.scope.store;
        self.scope
            .project_developers()
            .into_iter()
            .filter_map(|id| {
                let rec = store.node(&id)?;
                Some(DeveloperNode {
                    name: rec.str_prop("name")?.to_owned(),
                    email: rec.str_prop("email")?.to_owned(),
                    id,
                })
            })
            .collect()
    }

    /// Distinct file nodes reached by `Developer -Author-> Commit -UpdateFile-> File`.
    fn files_edited(&self, dev: &NodeId) -> BTreeSet<&'s NodeId> {
        let store = self.scope.store;
        self.scope
            .authored_commits(dev)
            .into_iter()
            .flat_map(|c| store.neighbor_ids(c, EdgeLabel::UpdateFile, Direction::Out))
            .collect()
    }

    /// Complexities of every `UpdateMethod` edge reached by
    /// `Developer -Author-> Commit -UpdateMethod-> Method`.
    fn method_update_complexities(&self, dev: &NodeId) -> Vec<i64> {
        let store = self.scope.store;
        let mut out = Vec::new();
        for commit in self.scope.authored_commits(dev) {
            for m in store.neighbor_ids(commit, EdgeLabel::UpdateMethod, Direction::Out) {
                if let Some(ccn) = store
                    .edge_props(EdgeLabel::UpdateMethod, commit, m)
                    .and_then(|p| p.get("complexity"))
                    .and_then(|v| v.as_int())
                {
                    out.push(ccn);
                }
            }
        }
        out
    }

    /// Q4: distinct files edited by the developer grouped by file type, as
    /// `(file_type, count, file_paths)`. Groups are ordered by count
    /// descending then type; `file_paths` lists current paths sorted and
    /// joined with `;`.
    pub fn developer_files_by_type(&self, dev: &str) -> Result<QueryResult, QueryError> {
        let id = self.resolve(dev)?;
        let store = self.scope.store;
        let mut groups: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for file in self.files_edited(&id) {
            let Some(rec) = store.node(file) else { continue };
            let ty = rec.str_prop("file_type").unwrap_or("unknown").to_owned();
            let path = rec.str_prop("current_path").unwrap_or_default().to_owned();
            groups.entry(ty).or_default().push(path);
        }
        let mut groups: Vec<(String, Vec<String>)> = groups.into_iter().collect();
        groups.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.0.cmp(&b.0)));

        let mut out = QueryResult::new(vec![
            Column::new("file_type", ScalarType::Str),
            Column::new("count", ScalarType::Int),
            Column::new("file_paths", ScalarType::Str),
        ]);
        for (ty, mut paths) in groups {
            paths.sort();
            out.push_row(vec![
                Scalar::Str(ty),
                Scalar::Int(paths.len() as i64),
                Scalar::Str(paths.join(";")),
            ]);
        }
        Ok(out)
    }

    /// Q5: mean complexity over every method update the developer made in
    /// the project. Each update counts, not each distinct method. `None`
    /// when there are no updates.
    pub fn developer_avg_method_complexity(&self, dev: &str) -> Result<Option<f64>, QueryError> {
        let id = self.resolve(dev)?;
        let ccns = self.method_update_complexities(&id);
        if ccns.is_empty() {
            return Ok(None);
        }
        let sum: i64 = ccns.iter().sum();
        Ok(Some(sum as f64 / ccns.len() as f64))
    }

    pub(crate) fn file_degrees(&self) -> Vec<WorstCase> {
        self.scope
            .project_developers()
            .into_iter()
            .map(|d| {
                let n = self.files_edited(&d).len() as u64;
                WorstCase { target: d, degree: n, workload: n }
            })
            .collect()
    }

    pub(crate) fn method_update_degrees(&self) -> Vec<WorstCase> {
        self.scope
            .project_developers()
            .into_iter()
            .map(|d| {
                let n = self.method_update_complexities(&d).len() as u64;
                WorstCase { target: d, degree: n, workload: n }
            })
            .collect()
    }
}
