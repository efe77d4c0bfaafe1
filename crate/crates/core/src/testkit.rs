//! In-memory three-commit history shared by unit tests.
//!
//! c1 (alice): adds `a.py` with `f` (ccn 1) and `g(x, y)` (ccn 3), adds `c.java`.
//! c2 (bob): modifies `f` (ccn 2), deletes `g`.
//! c3 (alice): renames `a.py` to `b.py`, no method touched.

use crate::bundle::{CommitBundle, FileChange, MethodChange};
use crate::model::*;

pub(crate) const PROJECT: &str = "F3";
pub(crate) const SHAS: [&str; 3] = [
    "1111111111111111111111111111111111111111",
    "2222222222222222222222222222222222222222",
    "3333333333333333333333333333333333333333",
];

pub(crate) fn project() -> ProjectId {
    ProjectId::new(PROJECT).unwrap()
}

fn update(ct: ChangeType, old: Option<&str>, new: Option<&str>, nloc: u64, ts: i64) -> UpdateFileProps {
    UpdateFileProps {
        change_type: ct,
        old_path: old.map(str::to_owned),
        new_path: new.map(str::to_owned),
        diff: format!("@@ {ts} @@"),
        source_before: old.map(|_| "before\n".to_owned()),
        source_after: new.map(|_| "after\n".to_owned()),
        nloc,
        added_lines: 1,
        removed_lines: 0,
        timestamp: ts,
    }
}

fn method(file: &FileNode, name: &str, long_name: &str, ccn: u32, ts: i64) -> MethodChange {
    let p = project();
    MethodChange {
        method: MethodNode::new(&p, &file.id, name, long_name).unwrap(),
        update: UpdateMethodProps { complexity: ccn, nloc: 2, token_count: 8, parameter_count: 0, timestamp: ts },
        file: file.clone(),
    }
}

pub(crate) fn bundles() -> Vec<CommitBundle> {
    let p = project();
    let alice = DeveloperNode::new("Alice", "A@x.y").unwrap();
    let bob = DeveloperNode::new("Bob", "b@x.y").unwrap();
    let master = BranchNode::new(&p, "master").unwrap();
    let a_py = FileNode::new(&p, "a.py").unwrap();
    let c_java = FileNode::new(&p, "c.java").unwrap();
    let b_py = a_py.clone().with_current_path("b.py");

    let c1 = CommitBundle {
        commit: CommitNode::new(&p, SHAS[0], "c1", 100, 0, 0).unwrap(),
        developer: alice.clone(),
        branches: vec![master.clone()],
        parents: vec![],
        file_changes: vec![
            FileChange { file: a_py.clone(), update: update(ChangeType::Add, None, Some("a.py"), 8, 100) },
            FileChange { file: c_java.clone(), update: update(ChangeType::Add, None, Some("c.java"), 3, 100) },
        ],
        method_changes: vec![
            method(&a_py, "f", "f()", 1, 100),
            method(&a_py, "g", "g(x, y)", 3, 100),
        ],
    };
    let c2 = CommitBundle {
        commit: CommitNode::new(&p, SHAS[1], "c2", 200, 60, 1).unwrap(),
        developer: bob,
        branches: vec![master.clone()],
        parents: vec![SHAS[0].into()],
        file_changes: vec![FileChange {
            file: a_py.clone(),
            update: update(ChangeType::Modify, Some("a.py"), Some("a.py"), 5, 200),
        }],
        method_changes: vec![method(&a_py, "f", "f()", 2, 200)],
    };
    let c3 = CommitBundle {
        commit: CommitNode::new(&p, SHAS[2], "c3", 300, 0, 1).unwrap(),
        developer: alice,
        branches: vec![master],
        parents: vec![SHAS[1].into()],
        file_changes: vec![FileChange {
            file: b_py,
            update: update(ChangeType::Rename, Some("a.py"), Some("b.py"), 5, 300),
        }],
        method_changes: vec![],
    };
    vec![c1, c2, c3]
}

pub(crate) fn store() -> crate::store::GraphStore {
    let mut s = crate::store::GraphStore::new();
    s.insert_batch(&bundles()).unwrap();
    s
}
