//! Brace-scoped languages: C, C++, Java, JavaScript/TypeScript.
//!
//! Tokens between two statement boundaries form a "head"; each `{` is
//! classified by its head. C family only looks for functions outside
//! function bodies; JavaScript looks everywhere.

use super::lexer::{Kind, Token};
use super::{Language, Parsed, Span};

enum Frame {
    Block,
    /// Class, struct, namespace or similar; `None` when anonymous.
    Container(Option<String>),
    Function(usize),
}

struct Level {
    frame: Frame,
    head: Vec<usize>,
    depth: i32,
}

const C_NOT_NAMES: &[&str] = &[
    "if", "for", "while", "switch", "catch", "return", "sizeof", "new", "else", "do", "try", "throw", "case",
    "synchronized", "alignof", "decltype", "typeof", "static_assert", "defined", "__attribute__", "throws",
    "noexcept", "delete", "alignas", "requires",
];

const C_TRAILERS: &[&str] = &[
    "const", "noexcept", "override", "final", "throws", "throw", "->", ":", "&", "&&", "volatile", "mutable", "try",
    "[",
];

const CONTAINERS: &[&str] = &["class", "struct", "union", "namespace", "interface", "enum", "record"];

const JS_NOT_NAMES: &[&str] = &[
    "if", "for", "while", "switch", "catch", "with", "return", "function", "typeof", "new", "await", "yield",
    "super", "import",
];

const JS_MODIFIERS: &[&str] = &[
    "static", "async", "get", "set", "public", "private", "protected", "readonly", "override", "abstract", "*",
];

pub(crate) fn parse(tokens: &[Token<'_>], lang: Language) -> Parsed {
    let mut spans = Vec::new();
    let mut stack = vec![Level { frame: Frame::Block, head: Vec::new(), depth: 0 }];
    for (i, t) in tokens.iter().enumerate() {
        if t.kind == Kind::Directive {
            continue;
        }
        let level = stack.last_mut().expect("global level");
        if t.kind != Kind::Punct {
            level.head.push(i);
            continue;
        }
        match t.text {
            "(" | "[" => {
                level.depth += 1;
                level.head.push(i);
            }
            ")" | "]" => {
                level.depth = (level.depth - 1).max(0);
                level.head.push(i);
            }
            ";" if level.depth == 0 => level.head.clear(),
            "{" => {
                let frame = classify(tokens, &stack, lang, &mut spans);
                stack.push(Level { frame, head: Vec::new(), depth: 0 });
            }
            "}" => {
                if stack.len() > 1 {
                    if let Some(Level { frame: Frame::Function(s), .. }) = stack.pop() {
                        spans[s].last = i;
                    }
                }
                stack.last_mut().expect("global level").head.clear();
            }
            _ => level.head.push(i),
        }
    }
    // Unclosed functions run to the end of the file.
    for level in &stack {
        if let Frame::Function(s) = level.frame {
            spans[s].last = tokens.len() - 1;
        }
    }
    Parsed::new(spans, tokens.len())
}

fn classify(tokens: &[Token<'_>], stack: &[Level], lang: Language, spans: &mut Vec<Span>) -> Frame {
    let head = &stack.last().expect("global level").head;
    let found = if lang == Language::JavaScript {
        js_function(tokens, head)
    } else if stack.iter().any(|l| matches!(l.frame, Frame::Function(_))) {
        return Frame::Block;
    } else {
        c_function(tokens, head, lang)
    };
    if let Some(mut span) = found {
        if lang.is_c_family() {
            span.name = qualify(stack, lang, span.name);
        }
        spans.push(span);
        return Frame::Function(spans.len() - 1);
    }
    container(tokens, head).map_or(Frame::Block, Frame::Container)
}

fn qualify(stack: &[Level], lang: Language, name: String) -> String {
    let mut scopes: Vec<&str> = stack
        .iter()
        .filter_map(|l| match &l.frame {
            Frame::Container(Some(n)) => Some(n.as_str()),
            _ => None,
        })
        .collect();
    if lang == Language::Java {
        scopes = scopes.split_off(scopes.len().saturating_sub(1));
    }
    scopes.push(&name);
    scopes.join("::")
}

fn container(tokens: &[Token<'_>], head: &[usize]) -> Option<Option<String>> {
    let k = head.iter().rposition(|&i| tokens[i].is_word() && CONTAINERS.contains(&tokens[i].text))?;
    let name = head[k + 1..]
        .iter()
        .map(|&i| &tokens[i])
        .find(|t| t.is_word() && !matches!(t.text, "final" | "sealed" | "abstract"))
        .filter(|t| !matches!(t.text, "extends" | "implements" | "public" | "private" | "protected"))
        .map(|t| t.text.to_owned());
    Some(name)
}

/// Index within `head` of the bracket opening the group closed at `close`.
fn open_of(tokens: &[Token<'_>], head: &[usize], close: usize) -> Option<usize> {
    let (o, c) = match tokens[head[close]].text {
        ")" => ("(", ")"),
        "]" => ("[", "]"),
        _ => return None,
    };
    let mut depth = 0;
    for k in (0..=close).rev() {
        let t = &tokens[head[k]];
        if t.kind != Kind::Punct {
            continue;
        }
        if t.text == c {
            depth += 1;
        } else if t.text == o {
            depth -= 1;
            if depth == 0 {
                return Some(k);
            }
        }
    }
    None
}

/// Index within `head` of the bracket closing the group opened at `open`.
fn close_of(tokens: &[Token<'_>], head: &[usize], open: usize) -> Option<usize> {
    let mut depth = 0;
    for (k, &i) in head.iter().enumerate().skip(open) {
        match tokens[i].text {
            "(" | "[" if tokens[i].kind == Kind::Punct => depth += 1,
            ")" | "]" if tokens[i].kind == Kind::Punct => {
                depth -= 1;
                if depth == 0 {
                    return Some(k);
                }
            }
            _ => {}
        }
    }
    None
}

fn c_function(tokens: &[Token<'_>], head: &[usize], lang: Language) -> Option<Span> {
    let text = |k: usize| tokens[head[k]].text;
    let mut k = 0;
    let mut depth = 0;
    while k < head.len() {
        let t = &tokens[head[k]];
        if lang == Language::Java && t.is("@") {
            // Annotation: `@Name`, `@a.b.Name`, optionally with arguments.
            k += 2;
            while k + 1 < head.len() && text(k) == "." {
                k += 2;
            }
            if k < head.len() && text(k) == "(" {
                k = close_of(tokens, head, k)? + 1;
            }
            continue;
        }
        if depth == 0 && t.is("=") {
            return None;
        }
        if lang == Language::Java && t.is_word() && t.text == "record" {
            return None;
        }
        if t.is("(") && depth == 0 && k > 0 {
            let close = close_of(tokens, head, k)?;
            if let Some((name, first)) = c_name(tokens, head, k) {
                let trailer_ok = head
                    .get(close + 1)
                    .is_none_or(|&n| C_TRAILERS.contains(&tokens[n].text) || tokens[n].text.starts_with("__"));
                if trailer_ok {
                    return Some(Span {
                        name,
                        first: head[first],
                        last: head[close],
                        params: head[k + 1..close].to_vec(),
                        reported: true,
                    });
                }
            }
            k = close + 1;
            continue;
        }
        match t.text {
            "(" | "[" if t.kind == Kind::Punct => depth += 1,
            ")" | "]" if t.kind == Kind::Punct => depth -= 1,
            _ => {}
        }
        k += 1;
    }
    None
}

/// Name ending right before the `(` at `paren`, with `A::B::` qualifiers,
/// destructor tilde and `operator` symbols. Returns the name and the index
/// of its first token.
fn c_name(tokens: &[Token<'_>], head: &[usize], paren: usize) -> Option<(String, usize)> {
    let tok = |k: usize| &tokens[head[k]];
    let mut first = paren - 1;
    let last = tok(first);
    if !last.is_word() {
        // `operator==`, `operator()`.
        let op_at = (0..first).rev().take(3).find(|&k| tok(k).text == "operator")?;
        first = op_at;
    } else if C_NOT_NAMES.contains(&last.text) {
        return None;
    }
    if first > 0 && tok(first - 1).is("~") {
        first -= 1;
    }
    while first >= 2 && tok(first - 1).is("::") && tok(first - 2).is_word() {
        first -= 2;
    }
    let name: String = (first..paren).map(|k| tok(k).text).collect();
    Some((name, first))
}

fn js_function(tokens: &[Token<'_>], head: &[usize]) -> Option<Span> {
    let n = head.len();
    if n == 0 {
        return None;
    }
    let tok = |k: usize| &tokens[head[k]];
    if tok(n - 1).is("=>") {
        let close = typed_close(tokens, head, n - 1).or((n >= 2 && tok(n - 2).is(")")).then(|| n - 2));
        let (params, before, first) = if let Some(close) = close {
            let p = open_of(tokens, head, close)?;
            (head[p + 1..close].to_vec(), p.checked_sub(1), p)
        } else if n >= 2 && tok(n - 2).is_word() {
            let end = n;
            (vec![head[end - 2]], (end - 2).checked_sub(1), end - 2)
        } else {
            return None;
        };
        let before = before.filter(|&b| tok(b).text != "async").or(before.and_then(|b| b.checked_sub(1)));
        let named = before.and_then(|b| assigned_name(tokens, head, b));
        return Some(match named {
            Some(nk) => Span { name: tok(nk).text.to_owned(), first: head[nk], last: 0, params, reported: true },
            None => Span { name: String::new(), first: head[first], last: 0, params, reported: false },
        });
    }

    let end = typed_close(tokens, head, n).map_or(n, |k| k + 1);
    if !tok(end - 1).is(")") {
        return None;
    }
    let p = open_of(tokens, head, end - 1)?;
    let params = head[p + 1..end - 1].to_vec();
    let w = p.checked_sub(1).map(tok)?;
    let before = |k: usize| p.checked_sub(k).map(tok);
    let is_fn_kw = |t: Option<&Token<'_>>| t.is_some_and(|t| t.is_word() && t.text == "function");

    if is_fn_kw(Some(w)) || (w.is("*") && is_fn_kw(before(2))) {
        let kw = if w.is("*") { p - 2 } else { p - 1 };
        let mut b = kw.checked_sub(1);
        if b.is_some_and(|b| tok(b).text == "async") {
            b = b.and_then(|b| b.checked_sub(1));
        }
        let named = b.and_then(|b| assigned_name(tokens, head, b));
        return Some(match named {
            Some(nk) => Span { name: tok(nk).text.to_owned(), first: head[nk], last: 0, params, reported: true },
            None => Span { name: String::new(), first: head[kw], last: 0, params, reported: false },
        });
    }
    if !w.is_word() || JS_NOT_NAMES.contains(&w.text) {
        return None;
    }
    let prev = before(2);
    let named_decl = is_fn_kw(prev) || (prev.is_some_and(|t| t.is("*")) && is_fn_kw(before(3)));
    let method = prev.is_none_or(|t| {
        JS_MODIFIERS.contains(&t.text) || t.is(",") || t.is("}") || (t.line < w.line && !t.is("."))
    });
    (named_decl || method).then(|| Span {
        name: w.text.to_owned(),
        first: head[p - 1],
        last: 0,
        params,
        reported: true,
    })
}

/// For `NAME =` / `NAME :` ending at `k`, the index of `NAME`.
fn assigned_name(tokens: &[Token<'_>], head: &[usize], k: usize) -> Option<usize> {
    let t = &tokens[head[k]];
    if !(t.is("=") || t.is(":")) {
        return None;
    }
    let nk = k.checked_sub(1)?;
    tokens[head[nk]].is_word().then_some(nk)
}

/// Position of the `)` closing the parameters when a TypeScript `: Type`
/// annotation sits between it and `end`.
fn typed_close(tokens: &[Token<'_>], head: &[usize], end: usize) -> Option<usize> {
    let k = head[..end].iter().rposition(|&i| tokens[i].is(")"))?;
    let tail = &head[k + 1..end];
    let typed = tail.first().is_some_and(|&i| tokens[i].is(":"))
        && tail.iter().all(|&i| !matches!(tokens[i].text, "=" | "(" | "=>" | ";" | "{"));
    typed.then_some(k)
}
