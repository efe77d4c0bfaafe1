//! Go: `func [recv] Name[T](params) results {`. Function literals own their
//! tokens but are not reported.

use super::lexer::Token;
use super::{matching, Parsed, Span};

pub(crate) fn parse(tokens: &[Token<'_>]) -> Parsed {
    let mut spans = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        if t.is_word() && t.text == "func" {
            spans.extend(function_at(tokens, i));
        }
    }
    Parsed::new(spans, tokens.len())
}

fn function_at(tokens: &[Token<'_>], func: usize) -> Option<Span> {
    let at = |k: usize| tokens.get(k);
    let mut k = func + 1;
    let mut name = None;
    if at(k)?.is("(") {
        let recv_close = matching(tokens, k);
        let named = at(recv_close + 1).is_some_and(|t| t.is_word())
            && at(recv_close + 2).is_some_and(|t| t.is("(") || t.is("["));
        if named {
            name = Some(recv_close + 1);
            k = recv_close + 2;
        }
    } else if at(k)?.is_word() {
        name = Some(k);
        k += 1;
    } else {
        return None;
    }
    if at(k)?.is("[") {
        k = matching(tokens, k) + 1;
    }
    if !at(k)?.is("(") {
        return None;
    }
    let params_close = matching(tokens, k);
    let body = body_open(tokens, params_close)?;
    Some(Span {
        name: name.map(|n| tokens[n].text.to_owned()).unwrap_or_default(),
        first: name.unwrap_or(func),
        last: matching(tokens, body),
        params: (k + 1..params_close).collect(),
        reported: name.is_some(),
    })
}

/// The `{` opening the body, found on the line of the parameters' `)`.
/// A function type such as a parameter `f func(int) int` has none.
fn body_open(tokens: &[Token<'_>], params_close: usize) -> Option<usize> {
    let line = tokens[params_close].line;
    let mut k = params_close + 1;
    let mut depth = 0i32;
    while let Some(t) = tokens.get(k) {
        if t.line != line && depth == 0 {
            return None;
        }
        match t.text {
            "(" | "[" if !t.is_word() => depth += 1,
            ")" | "]" if depth > 0 => depth -= 1,
            "{" if depth == 0 => {
                let prev = &tokens[k - 1];
                if prev.is_word() && matches!(prev.text, "interface" | "struct") {
                    k = matching(tokens, k) + 1;
                    continue;
                }
                return Some(k);
            }
            ")" | "," | ";" | "}" | "=" if depth == 0 => return None,
            _ => {}
        }
        k += 1;
    }
    None
}
