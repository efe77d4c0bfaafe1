//! Which functions a diff touched.

use std::collections::{HashMap, HashSet};

use crate::lang::MethodDecl;

/// Inclusive 1-based line range.
pub type LineRange = (u32, u32);

fn intersects(span: LineRange, ranges: &[LineRange]) -> bool {
    ranges.iter().any(|&(s, e)| s <= span.1 && span.0 <= e)
}

/// Methods of the after-state that the change touched, in after order and
/// unique by long name. A method counts when its span holds an added line,
/// when it is new, or when its before-state span lost a line.
pub fn attribute_method_changes(
    before: &[MethodDecl],
    after: &[MethodDecl],
    hunks: &[LineRange],
    deleted_ranges: &[LineRange],
) -> Vec<MethodDecl> {
    let before_spans: HashMap<&str, LineRange> =
        before.iter().rev().map(|m| (m.long_name.as_str(), (m.start_line, m.end_line))).collect();
    let mut seen = HashSet::new();
    after
        .iter()
        .filter(|m| match before_spans.get(m.long_name.as_str()) {
            None => true,
            Some(&old) => intersects((m.start_line, m.end_line), hunks) || intersects(old, deleted_ranges),
        })
        .filter(|m| seen.insert(m.long_name.as_str()))
        .cloned()
        .collect()
}

/// Collapses sorted line numbers into maximal runs.
pub fn ranges_of(lines: impl IntoIterator<Item = u32>) -> Vec<LineRange> {
    let mut out: Vec<LineRange> = Vec::new();
    for l in lines {
        match out.last_mut() {
            Some(last) if l == last.1 + 1 => last.1 = l,
            Some(last) if l <= last.1 => {}
            _ => out.push((l, l)),
        }
    }
    out
}
