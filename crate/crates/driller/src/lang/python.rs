//! Indentation-scoped functions. A `def` ends before the first logical line
//! indented no deeper than the `def` itself.

use super::lexer::{Kind, Token};
use super::{matching, Parsed, Span};

/// Tokens after which a triple-quoted string is a value rather than a
/// docstring-like statement.
const VALUE_CONTEXT: &[&str] = &[
    "=", "+=", "-=", "*=", "/=", "%=", "//=", "**=", "&=", "|=", "^=", "<<=", ">>=", "(", "return", ",", "[", "+",
    "-", "*", "/", "%",
];

pub(crate) fn parse(tokens: &[Token<'_>]) -> Parsed {
    let mut spans: Vec<Span> = Vec::new();
    // (span index, indent of the line holding `def`)
    let mut open: Vec<(usize, u32)> = Vec::new();
    let mut depth = 0i32;
    let mut line_indent = 0;
    let mut i = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        if depth == 0 && t.line_start {
            line_indent = t.indent;
            while let Some(&(s, def_indent)) = open.last() {
                if t.indent > def_indent {
                    break;
                }
                spans[s].last = i - 1;
                open.pop();
            }
        }
        if t.kind == Kind::Punct {
            match t.text {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => depth = (depth - 1).max(0),
                _ => {}
            }
        }
        if t.is_word() && t.text == "def" {
            if let (Some(name), Some(paren)) = (tokens.get(i + 1), tokens.get(i + 2)) {
                if name.is_word() && paren.is("(") {
                    let close = matching(tokens, i + 2);
                    let mut qualified: Vec<&str> = open.iter().map(|&(s, _)| spans[s].name.as_str()).collect();
                    qualified.push(name.text);
                    spans.push(Span {
                        name: qualified.join("."),
                        first: i + 1,
                        last: tokens.len() - 1,
                        params: (i + 3..close).collect(),
                        reported: true,
                    });
                    open.push((spans.len() - 1, line_indent));
                    i = close + 1;
                    continue;
                }
            }
        }
        i += 1;
    }
    let mut parsed = Parsed::new(spans, tokens.len());
    for (i, t) in tokens.iter().enumerate() {
        if is_triple_quoted(t) {
            let prev = i.checked_sub(1).map(|p| tokens[p].text);
            parsed.silent[i] = !prev.is_some_and(|p| VALUE_CONTEXT.contains(&p));
        }
    }
    parsed
}

fn is_triple_quoted(t: &Token<'_>) -> bool {
    if t.kind != Kind::Str {
        return false;
    }
    let body = t.text.trim_start_matches(|c: char| c.is_ascii_alphabetic());
    body.len() >= 6 && (body.starts_with("\"\"\"") || body.starts_with("'''"))
}

/// `case` is a branch only as the head of a logical line inside a `match`,
/// which shows as not being used like a plain name.
pub(crate) fn is_soft_case(tokens: &[Token<'_>], i: usize) -> bool {
    if !tokens[i].line_start {
        return false;
    }
    let Some(next) = tokens.get(i + 1) else { return false };
    if next.line != tokens[i].line {
        return false;
    }
    if next.kind == Kind::Punct {
        if matches!(next.text, "=" | "." | ":" | ",") || (next.text.ends_with('=') && next.text != "==") {
            return false;
        }
        if matches!(next.text, "(" | "[") {
            // `case(x)` is a call unless a pattern colon follows at depth 0.
            let close = matching(tokens, i + 1);
            return tokens.get(close + 1).is_some_and(|t| t.is(":") || t.is("if") || t.is("|") || t.is("as"));
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use crate::lang::{detect_methods, Language};

    fn summary(src: &str) -> Vec<(String, u32, u32, u32)> {
        detect_methods(src, Language::Python)
            .into_iter()
            .map(|m| (m.name, m.nloc, m.complexity, m.parameter_count))
            .collect()
    }

    #[test]
    fn nested_and_sibling_defs() {
        let src = "\
def outer(x):
    def inner(y):
        return y and x
    return inner

def other():
    pass
";
        assert_eq!(summary(src), vec![
            ("outer".into(), 3, 1, 1),
            ("outer.inner".into(), 2, 2, 1),
            ("other".into(), 2, 1, 0),
        ]);
    }

    #[test]
    fn docstrings_are_not_code() {
        let src = "def f():\n    \"\"\"Doc\n    more\n    \"\"\"\n    x = '''kept\n    '''\n    return x\n";
        let m = &detect_methods(src, Language::Python)[0];
        assert_eq!(m.nloc, 4);
        assert_eq!((m.start_line, m.end_line), (1, 7));
    }

    #[test]
    fn methods_have_no_class_prefix() {
        let src = "class A:\n    def m(self, a, b=2):\n        if a: return b\n";
        assert_eq!(summary(src), vec![("m".into(), 2, 2, 3)]);
    }

    #[test]
    fn soft_case_only_in_patterns() {
        let src = "\
def f(cmd):
    case = 1
    match cmd:
        case 'a':
            return case
        case ('b', x):
            return x
        case _:
            return None
";
        assert_eq!(summary(src)[0].2, 4);
    }

    #[test]
    fn brackets_suspend_indentation() {
        let src = "def f(a):\n    x = [\n1,\n2]\n    return x\ny = 3\n";
        let m = &detect_methods(src, Language::Python)[0];
        assert_eq!(m.nloc, 5);
        assert_eq!(m.end_line, 5);
    }
}
