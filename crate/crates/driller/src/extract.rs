//! Turns one git commit into a [`CommitBundle`].
//!
//! File nodes in an extracted bundle are keyed naively on the pre-change
//! path; [`crate::bind`] later rewrites them to the file's real identity.

use std::collections::HashMap;

use git2::{Commit, Delta, DiffFindOptions, DiffOptions, FileMode, Oid, Patch, Repository, Sort};
use grepo_core::{
    BranchNode, ChangeType, CommitBundle, CommitNode, DeveloperNode, FileChange, FileNode, MethodChange,
    MethodNode, ProjectId, UpdateFileProps, UpdateMethodProps,
};

use crate::attribution::{attribute_method_changes, ranges_of};
use crate::lang::{self, Language, MethodDecl};
use crate::DrillError;

/// Similarity (percent) at which a delete/add pair becomes a rename.
pub const RENAME_THRESHOLD: u16 = 50;

/// Settings that influence a bundle's content.
#[derive(Clone, Debug)]
pub struct ExtractOptions {
    pub project_id: ProjectId,
    pub index_source_code: bool,
}

/// Local branch tips, sorted by branch name.
pub fn local_branches(repo: &Repository) -> Result<Vec<(String, Oid)>, DrillError> {
    let mut out = Vec::new();
    for branch in repo.branches(Some(git2::BranchType::Local))? {
        let (branch, _) = branch?;
        let Some(name) = branch.name()?.map(str::to_owned) else { continue };
        if let Ok(commit) = branch.get().peel_to_commit() {
            out.push((name, commit.id()));
        }
    }
    out.sort();
    Ok(out)
}

/// Commits reachable from any local branch (HEAD when there is none) with
/// an author timestamp inside `[start, end]`, parents before children.
pub fn commits_in_window(repo: &Repository, start: Option<i64>, end: Option<i64>) -> Result<Vec<Oid>, DrillError> {
    let mut walk = repo.revwalk()?;
    walk.set_sorting(Sort::TOPOLOGICAL | Sort::TIME | Sort::REVERSE)?;
    let branches = local_branches(repo)?;
    if branches.is_empty() {
        if repo.head().is_err() {
            return Ok(Vec::new());
        }
        walk.push_head()?;
    }
    for (_, tip) in &branches {
        walk.push(*tip)?;
    }
    let mut out = Vec::new();
    for oid in walk {
        let oid = oid?;
        let t = repo.find_commit(oid)?.author().when().seconds();
        if start.is_none_or(|s| s <= t) && end.is_none_or(|e| t <= e) {
            out.push(oid);
        }
    }
    Ok(out)
}

/// For every commit reachable from a local branch, the sorted names of the
/// branches whose history contains it.
pub fn branch_membership(repo: &Repository) -> Result<HashMap<Oid, Vec<String>>, DrillError> {
    let mut out: HashMap<Oid, Vec<String>> = HashMap::new();
    for (name, tip) in local_branches(repo)? {
        let mut walk = repo.revwalk()?;
        walk.push(tip)?;
        for oid in walk {
            out.entry(oid?).or_default().push(name.clone());
        }
    }
    Ok(out)
}

/// Extracts one commit, computing its branch membership directly.
pub fn extract_commit(repo: &Repository, sha: &str, opts: &ExtractOptions) -> Result<CommitBundle, DrillError> {
    let oid = Oid::from_str(sha).map_err(|_| DrillError::UnknownCommit(sha.to_owned()))?;
    let commit = repo.find_commit(oid).map_err(|_| DrillError::UnknownCommit(sha.to_owned()))?;
    let mut branches = Vec::new();
    for (name, tip) in local_branches(repo)? {
        if tip == oid || repo.graph_descendant_of(tip, oid)? {
            branches.push(name);
        }
    }
    extract_with_branches(repo, &commit, opts, &branches)
}

pub(crate) fn extract_with_branches(
    repo: &Repository,
    commit: &Commit<'_>,
    opts: &ExtractOptions,
    branches: &[String],
) -> Result<CommitBundle, DrillError> {
    let project = &opts.project_id;
    let author = commit.author();
    let when = author.when();
    let timestamp = when.seconds();
    let sha = commit.id().to_string();
    let message = String::from_utf8_lossy(commit.message_bytes()).into_owned();
    let commit_node = CommitNode::new(project, &sha, &message, timestamp, when.offset_minutes(), commit.parent_count())?;
    let developer = DeveloperNode::new(
        &String::from_utf8_lossy(author.name_bytes()),
        &String::from_utf8_lossy(author.email_bytes()),
    )?;
    let branches = branches.iter().map(|b| BranchNode::new(project, b)).collect::<Result<_, _>>()?;
    let parents = commit.parent_ids().map(|p| p.to_string()).collect();

    let (file_changes, method_changes) = diff_first_parent(repo, commit, opts, timestamp)?;
    Ok(CommitBundle { commit: commit_node, developer, branches, parents, file_changes, method_changes })
}

fn diff_first_parent(
    repo: &Repository,
    commit: &Commit<'_>,
    opts: &ExtractOptions,
    timestamp: i64,
) -> Result<(Vec<FileChange>, Vec<MethodChange>), DrillError> {
    let tree = commit.tree()?;
    let parent_tree = if commit.parent_count() > 0 { Some(commit.parent(0)?.tree()?) } else { None };
    let mut diff_opts = DiffOptions::new();
    diff_opts.context_lines(3);
    let mut diff = repo.diff_tree_to_tree(parent_tree.as_ref(), Some(&tree), Some(&mut diff_opts))?;
    let mut find = DiffFindOptions::new();
    find.renames(true).rename_threshold(RENAME_THRESHOLD);
    diff.find_similar(Some(&mut find))?;

    let mut files = Vec::new();
    let mut methods = Vec::new();
    for idx in 0..diff.deltas().len() {
        let delta = diff.get_delta(idx).expect("index in range");
        let change_type = match delta.status() {
            Delta::Added | Delta::Copied => ChangeType::Add,
            Delta::Deleted => ChangeType::Delete,
            Delta::Modified | Delta::Typechange => ChangeType::Modify,
            Delta::Renamed => ChangeType::Rename,
            _ => continue,
        };
        let path_of = |f: git2::DiffFile<'_>| f.path().map(|p| p.to_string_lossy().replace('\\', "/"));
        let old_path = path_of(delta.old_file());
        let new_path = path_of(delta.new_file());
        let (old_path, new_path) = match change_type {
            ChangeType::Add => (None, new_path),
            ChangeType::Delete => (old_path, None),
            _ => (old_path, new_path),
        };
        let change_type = if change_type == ChangeType::Rename && old_path == new_path {
            ChangeType::Modify
        } else {
            change_type
        };
        let Some(key_path) = old_path.as_deref().or(new_path.as_deref()) else { continue };

        let gitlink = delta.old_file().mode() == FileMode::Commit || delta.new_file().mode() == FileMode::Commit;
        let old_blob = (!gitlink && old_path.is_some()).then(|| blob_bytes(repo, delta.old_file().id())).flatten();
        let new_blob = (!gitlink && new_path.is_some()).then(|| blob_bytes(repo, delta.new_file().id())).flatten();
        let patch = if gitlink { None } else { Patch::from_diff(&diff, idx)? };
        let binary = gitlink
            || delta.flags().is_binary()
            || patch.as_ref().is_some_and(|p| p.delta().flags().is_binary())
            || old_blob.as_ref().is_some_and(|b| b.binary)
            || new_blob.as_ref().is_some_and(|b| b.binary);

        let file = FileNode::new(&opts.project_id, key_path)?.with_current_path(new_path.as_deref().unwrap_or(key_path));
        let mut update = UpdateFileProps {
            change_type,
            old_path: old_path.clone(),
            new_path: new_path.clone(),
            diff: String::new(),
            source_before: None,
            source_after: None,
            nloc: 0,
            added_lines: 0,
            removed_lines: 0,
            timestamp,
        };
        if binary {
            files.push(FileChange { file, update });
            continue;
        }
        let before = old_blob.map(|b| b.text).unwrap_or_default();
        let after = new_blob.map(|b| b.text).unwrap_or_default();
        let (mut added, mut deleted) = (Vec::new(), Vec::new());
        if let Some(mut patch) = patch {
            let (_, adds, dels) = patch.line_stats()?;
            update.added_lines = adds as u64;
            update.removed_lines = dels as u64;
            collect_changed_lines(&patch, &mut added, &mut deleted)?;
            update.diff = String::from_utf8_lossy(patch.to_buf()?.as_ref()).into_owned();
        }
        if opts.index_source_code {
            update.source_before = old_path.as_ref().map(|_| before.clone());
            update.source_after = new_path.as_ref().map(|_| after.clone());
        }

        let lang = Language::from_path(new_path.as_deref().unwrap_or(key_path));
        if change_type != ChangeType::Delete {
            update.nloc = match lang {
                Some(l) => lang::analyze_as(&after, l).nloc,
                None => lang::plain_nloc(&after),
            }
            .into();
        }
        if let (Some(l), true) = (lang, change_type != ChangeType::Delete) {
            let old_decls: Vec<MethodDecl> = match (&old_path, Language::from_path(key_path)) {
                (Some(_), Some(old_lang)) => lang::detect_methods(&before, old_lang),
                _ => Vec::new(),
            };
            let new_decls = lang::detect_methods(&after, l);
            let hunks = ranges_of(added);
            let deleted_ranges = ranges_of(deleted);
            for decl in attribute_method_changes(&old_decls, &new_decls, &hunks, &deleted_ranges) {
                methods.push(MethodChange {
                    method: MethodNode::new(&opts.project_id, &file.id, &decl.name, &decl.long_name)?,
                    update: UpdateMethodProps {
                        complexity: decl.complexity,
                        nloc: decl.nloc,
                        token_count: decl.token_count,
                        parameter_count: decl.parameter_count,
                        timestamp,
                    },
                    file: file.clone(),
                });
            }
        }
        files.push(FileChange { file, update });
    }
    Ok((files, methods))
}

struct Blob {
    text: String,
    binary: bool,
}

fn blob_bytes(repo: &Repository, id: Oid) -> Option<Blob> {
    if id.is_zero() {
        return None;
    }
    let blob = repo.find_blob(id).ok()?;
    Some(Blob { text: String::from_utf8_lossy(blob.content()).into_owned(), binary: blob.is_binary() })
}

/// Added lines in new-file numbering and removed lines in old-file
/// numbering, each ascending.
fn collect_changed_lines(patch: &Patch<'_>, added: &mut Vec<u32>, deleted: &mut Vec<u32>) -> Result<(), git2::Error> {
    for h in 0..patch.num_hunks() {
        for l in 0..patch.num_lines_in_hunk(h)? {
            let line = patch.line_in_hunk(h, l)?;
            match line.origin() {
                '+' => added.extend(line.new_lineno()),
                '-' => deleted.extend(line.old_lineno()),
                _ => {}
            }
        }
    }
    added.sort_unstable();
    deleted.sort_unstable();
    Ok(())
}
