//! Canonical JSON-lines dump: nodes sorted by `(label, id)`, then edges
//! sorted by `(label, src, dst)`, property keys sorted.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::model::{EdgeLabel, NodeId, NodeLabel, ProjectId, Props};

use super::{Direction, GraphStore};

fn props_json(props: &Props) -> String {
    serde_json::to_string(props).expect("scalar property maps always serialize")
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

impl GraphStore {
    /// Node ids that belong to `project`'s view: its own nodes plus every
    /// developer who authored one of its commits.
    pub fn project_node_ids(&self, project: &ProjectId) -> BTreeSet<(NodeLabel, NodeId)> {
        let mut ids = BTreeSet::new();
        for label in NodeLabel::ALL.into_iter().filter(|l| l.is_project_scoped()) {
            for id in self.nodes_by_label(label, Some(project)) {
                ids.insert((label, id));
            }
        }
        for commit in self.nodes_by_label(NodeLabel::Commit, Some(project)) {
            for dev in self.neighbor_ids(&commit, EdgeLabel::Author, Direction::In) {
                ids.insert((NodeLabel::Developer, dev.clone()));
            }
        }
        ids
    }

    /// Edges in canonical order, optionally restricted to one project.
    pub fn sorted_edges(&self, project: Option<&ProjectId>) -> Vec<(EdgeLabel, &NodeId, &NodeId, &Props)> {
        let mut edges: Vec<_> = self
            .edges()
            .filter(|(label, src, dst, _)| match project {
                Some(p) => self.edge_project(*label, src, dst) == Some(p.as_str()),
                None => true,
            })
            .collect();
        edges.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
        edges
    }

    /// Nodes in canonical order, optionally restricted to one project.
    pub fn sorted_nodes(&self, project: Option<&ProjectId>) -> Vec<(NodeLabel, NodeId)> {
        match project {
            Some(p) => self.project_node_ids(p).into_iter().collect(),
            None => {
                let mut all: Vec<_> = self.nodes().map(|(id, rec)| (rec.label, id.clone())).collect();
                all.sort();
                all
            }
        }
    }

    /// Writes the canonical dump and returns the number of lines written.
    pub fn write_dump<W: Write>(&self, mut out: W, project: Option<&ProjectId>) -> io::Result<usize> {
        let mut lines = 0;
        for (label, id) in self.sorted_nodes(project) {
            let rec = &self.nodes[&id];
            writeln!(
                out,
                r#"{{"t":"n","l":{},"id":{},"p":{}}}"#,
                json_str(label.as_str()),
                json_str(id.as_str()),
                props_json(&rec.props)
            )?;
            lines += 1;
        }
        for (label, src, dst, props) in self.sorted_edges(project) {
            writeln!(
                out,
                r#"{{"t":"e","l":{},"s":{},"d":{},"p":{}}}"#,
                json_str(label.as_str()),
                json_str(src.as_str()),
                json_str(dst.as_str()),
                props_json(props)
            )?;
            lines += 1;
        }
        out.flush()?;
        Ok(lines)
    }

    pub fn dump_string(&self, project: Option<&ProjectId>) -> String {
        let mut buf = Vec::new();
        self.write_dump(&mut buf, project).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("dump is UTF-8")
    }

    /// Exports the canonical dump to `path`; returns the record count.
    pub fn export_jsonl(&self, path: impl AsRef<Path>, project: Option<&ProjectId>) -> io::Result<usize> {
        let file = File::create(path)?;
        self.write_dump(BufWriter::new(file), project)
    }
}
