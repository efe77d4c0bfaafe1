//! Source metrics: file NLOC, function boundaries, cyclomatic complexity.
//!
//! Every token belongs to the innermost function whose span (name token to
//! closing token) contains it. A function's NLOC is the number of distinct
//! lines its own tokens touch; comments never produce tokens.

mod brace;
mod golang;
mod lexer;
mod python;

use std::collections::BTreeSet;
use std::path::Path;

use lexer::{Kind, Token};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Language {
    Python,
    /// C and C++. Names carry the full `namespace::class::` chain.
    CFamily,
    /// Java is parsed as C family, but names carry only the innermost class.
    Java,
    Go,
    /// JavaScript and TypeScript.
    JavaScript,
}

impl Language {
    pub fn from_path(path: &str) -> Option<Language> {
        let ext = Path::new(path).extension()?.to_str()?.to_ascii_lowercase();
        Some(match ext.as_str() {
            "py" => Language::Python,
            "c" | "cc" | "cpp" | "cxx" | "h" | "hh" | "hpp" | "hxx" => Language::CFamily,
            "java" => Language::Java,
            "go" => Language::Go,
            "js" | "mjs" | "cjs" | "jsx" | "ts" | "tsx" => Language::JavaScript,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Language::Python => "python",
            Language::CFamily | Language::Java => "c_family",
            Language::Go => "go",
            Language::JavaScript => "javascript",
        }
    }

    pub(crate) fn is_c_family(self) -> bool {
        matches!(self, Language::CFamily | Language::Java)
    }

    /// Tokens that open a decision point, apart from context-dependent ones
    /// (Python's soft `case`, generic `?`).
    fn branch_keywords(self) -> &'static [&'static str] {
        match self {
            Language::Python => &["if", "elif", "for", "while", "except", "and", "or"],
            _ => &["if", "for", "while", "catch", "case", "&&", "||", "?"],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MethodDecl {
    pub name: String,
    /// `name(params)` with the parameter text whitespace-normalised.
    pub long_name: String,
    pub start_line: u32,
    pub end_line: u32,
    pub complexity: u32,
    pub nloc: u32,
    pub token_count: u32,
    pub parameter_count: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceMetrics {
    pub nloc: u32,
    pub methods: Vec<MethodDecl>,
}

/// `1 + number of branch tokens`. Python's soft keyword `case` is counted
/// here unconditionally; [`detect_methods`] applies the positional rule.
pub fn cyclomatic_complexity(tokens: &[&str], lang: Language) -> u32 {
    let mut table = lang.branch_keywords().to_vec();
    if lang == Language::Python {
        table.push("case");
    }
    1 + tokens.iter().filter(|t| table.contains(t)).count() as u32
}

pub fn detect_methods(source: &str, lang: Language) -> Vec<MethodDecl> {
    analyze_as(source, lang).methods
}

/// Metrics for a file, or `None` when the path has no supported extension.
pub fn analyze(path: &str, source: &str) -> Option<SourceMetrics> {
    Language::from_path(path).map(|lang| analyze_as(source, lang))
}

/// NLOC for a file in an unsupported language: non-blank lines.
pub fn plain_nloc(source: &str) -> u32 {
    source.lines().filter(|l| !l.trim().is_empty()).count() as u32
}

pub fn analyze_as(source: &str, lang: Language) -> SourceMetrics {
    let tokens = lexer::tokenize(source, lang);
    let parsed = match lang {
        Language::Python => python::parse(&tokens),
        Language::Go => golang::parse(&tokens),
        Language::CFamily | Language::Java | Language::JavaScript => brace::parse(&tokens, lang),
    };
    measure(&tokens, parsed, lang)
}

/// A function found by a front end, as token indices.
#[derive(Debug)]
pub(crate) struct Span {
    pub name: String,
    /// Name token, or the first token of an anonymous function.
    pub first: usize,
    /// Closing token.
    pub last: usize,
    /// Token indices strictly between the parameter parentheses.
    pub params: Vec<usize>,
    /// Anonymous functions own their tokens but are not reported.
    pub reported: bool,
}

pub(crate) struct Parsed {
    pub spans: Vec<Span>,
    /// Tokens that occupy lines without counting towards NLOC.
    pub silent: Vec<bool>,
}

impl Parsed {
    pub fn new(spans: Vec<Span>, n: usize) -> Self {
        Self { spans, silent: vec![false; n] }
    }
}

#[derive(Default)]
struct Tally {
    lines: BTreeSet<u32>,
    tokens: u32,
    branches: u32,
}

fn measure(tokens: &[Token<'_>], mut parsed: Parsed, lang: Language) -> SourceMetrics {
    parsed.spans.sort_by_key(|s| (s.first, std::cmp::Reverse(s.last)));
    let mut tallies: Vec<Tally> = parsed.spans.iter().map(|_| Tally::default()).collect();
    let mut file_lines = BTreeSet::new();
    let mut open: Vec<usize> = Vec::new();
    let mut next = 0;
    for (i, tok) in tokens.iter().enumerate() {
        while open.last().is_some_and(|&s| parsed.spans[s].last < i) {
            open.pop();
        }
        while next < parsed.spans.len() && parsed.spans[next].first <= i {
            open.push(next);
            next += 1;
        }
        let lines = tok.line..=tok.end_line;
        if !parsed.silent[i] {
            file_lines.extend(lines.clone());
        }
        let Some(&owner) = open.last() else { continue };
        let tally = &mut tallies[owner];
        tally.tokens += 1;
        if !parsed.silent[i] {
            tally.lines.extend(lines);
        }
        if is_branch(tokens, i, lang) {
            tally.branches += 1;
        }
    }

    let methods = parsed
        .spans
        .iter()
        .zip(tallies)
        .filter(|(s, _)| s.reported)
        .map(|(s, t)| MethodDecl {
            long_name: format!("{}({})", s.name, join_tokens(s.params.iter().map(|&i| &tokens[i]))),
            name: s.name.clone(),
            start_line: tokens[s.first].line,
            end_line: tokens[s.last].end_line,
            complexity: 1 + t.branches,
            nloc: t.lines.len() as u32,
            token_count: t.tokens,
            parameter_count: count_params(tokens, &s.params, lang),
        })
        .collect();
    SourceMetrics { nloc: file_lines.len() as u32, methods }
}

fn is_branch(tokens: &[Token<'_>], i: usize, lang: Language) -> bool {
    let tok = &tokens[i];
    if matches!(tok.kind, Kind::Str | Kind::Number | Kind::Directive) {
        return false;
    }
    if lang == Language::Python && tok.text == "case" {
        return python::is_soft_case(tokens, i);
    }
    if !lang.branch_keywords().contains(&tok.text) {
        return false;
    }
    if tok.text == "?" && lang == Language::Java {
        // `List<? extends T>` is a wildcard, not a conditional.
        let prev = i.checked_sub(1).map(|p| tokens[p].text);
        return !matches!(prev, Some("<") | Some(","))
            || !tokens.get(i + 1).is_some_and(|n| matches!(n.text, ">" | "," | "extends" | "super"));
    }
    true
}

/// Joins token texts with single spaces, dropping the space around
/// brackets, commas and member access.
pub(crate) fn join_tokens<'t, 'a: 't>(toks: impl Iterator<Item = &'t Token<'a>>) -> String {
    let mut out = String::new();
    let mut prev: Option<&str> = None;
    for t in toks {
        let glue = match prev {
            None => false,
            Some(p) => {
                !matches!(t.text, "," | ")" | "]" | "." | "::" | "?." | ":" | ">")
                    && !matches!(p, "(" | "[" | "." | "::" | "?." | "<" | "*" | "&" | "**" | "...")
            }
        };
        if glue {
            out.push(' ');
        }
        out.push_str(t.text);
        prev = Some(t.text);
    }
    out
}

/// Counts parameter groups: comma-separated runs at bracket depth zero that
/// contain a name, i.e. end in a word or have a word followed by `=` or `:`.
fn count_params(tokens: &[Token<'_>], params: &[usize], lang: Language) -> u32 {
    let angle = lang.is_c_family();
    let mut groups: Vec<Vec<&Token<'_>>> = vec![Vec::new()];
    let mut depth = 0i32;
    for &i in params {
        let t = &tokens[i];
        match t.text {
            "(" | "[" | "{" => depth += 1,
            "<" if angle => depth += 1,
            ")" | "]" | "}" => depth -= 1,
            ">" if angle => depth -= 1,
            "," if depth == 0 && t.kind == Kind::Punct => {
                groups.push(Vec::new());
                continue;
            }
            _ => {}
        }
        if angle && lang == Language::CFamily && t.text == "void" && depth == 0 {
            continue;
        }
        groups.last_mut().expect("non-empty").push(t);
    }
    let ends_in_word = |t: &Token<'_>| t.text.chars().last().is_some_and(|c| c.is_alphanumeric() || c == '_');
    groups
        .iter()
        .filter(|g| {
            g.last().is_some_and(|t| ends_in_word(t))
                || g.windows(2).any(|w| ends_in_word(w[0]) && (w[1].text.starts_with('=') || w[1].text.starts_with(':')))
        })
        .count() as u32
}

/// Index of the token closing the bracket opened at `open`, or the last
/// token when unbalanced.
pub(crate) fn matching(tokens: &[Token<'_>], open: usize) -> usize {
    let (o, c) = match tokens[open].text {
        "(" => ("(", ")"),
        "[" => ("[", "]"),
        "{" => ("{", "}"),
        _ => return open,
    };
    let mut depth = 0u32;
    for (i, t) in tokens.iter().enumerate().skip(open) {
        if t.kind != Kind::Punct {
            continue;
        }
        if t.text == o {
            depth += 1;
        } else if t.text == c {
            depth -= 1;
            if depth == 0 {
                return i;
            }
        }
    }
    tokens.len().saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_table() {
        assert_eq!(Language::from_path("a/b.PY"), Some(Language::Python));
        assert_eq!(Language::from_path("x.hpp"), Some(Language::CFamily));
        assert_eq!(Language::from_path("X.java").map(Language::name), Some("c_family"));
        assert_eq!(Language::from_path("m.tsx"), Some(Language::JavaScript));
        assert_eq!(Language::from_path("README"), None);
        assert_eq!(Language::from_path("notes.md"), None);
    }

    #[test]
    fn complexity_counts_branch_tokens() {
        assert_eq!(cyclomatic_complexity(&[], Language::Go), 1);
        assert_eq!(cyclomatic_complexity(&["if", "a", "&&", "b", "else", "x"], Language::Go), 3);
        assert_eq!(cyclomatic_complexity(&["if", "a", "and", "b", "finally"], Language::Python), 3);
        assert_eq!(cyclomatic_complexity(&["&&"], Language::Python), 1);
    }

    #[test]
    fn params_group_rules() {
        let cases = [
            ("f(int a, char *b)", Language::CFamily, 2),
            ("f(void)", Language::CFamily, 0),
            ("f(Map<K, V> m)", Language::Java, 1),
            ("f(self, *args, x: int = 3, **kw)", Language::Python, 4),
            ("f(a, b = {}, c)", Language::JavaScript, 3),
            ("f()", Language::Go, 0),
        ];
        for (src, lang, want) in cases {
            let toks = lexer::tokenize(src, lang);
            let close = toks.len() - 1;
            let idx: Vec<usize> = (2..close).collect();
            assert_eq!(count_params(&toks, &idx, lang), want, "{src}");
        }
    }

    #[test]
    fn long_name_normalises_spacing() {
        let src = "def f(a,   b :int=1, *rest):\n    pass\n";
        let m = detect_methods(src, Language::Python);
        assert_eq!(m[0].long_name, "f(a, b: int = 1, *rest)");
    }

    #[test]
    fn file_nloc_ignores_comments_and_blanks() {
        let src = "// c\nint x;\n\n/* a\n b */\nint y; // t\n";
        assert_eq!(analyze_as(src, Language::CFamily).nloc, 2);
        assert_eq!(plain_nloc("a\n\n  \nb\n"), 2);
    }
}
