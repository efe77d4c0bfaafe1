//! Comment-free token stream shared by every language front end.

use super::Language;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Kind {
    Word,
    Number,
    Str,
    Punct,
    /// A C preprocessor line, continuation lines included.
    Directive,
}

#[derive(Clone, Debug)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub kind: Kind,
    /// 1-based line of the first character.
    pub line: u32,
    /// Line of the last character; differs from `line` only for multi-line
    /// strings and directives.
    pub end_line: u32,
    /// First token of a physical line that does not continue the previous
    /// one with a backslash.
    pub line_start: bool,
    /// Leading whitespace width of the token's line, tabs counted as 8.
    pub indent: u32,
}

impl Token<'_> {
    pub fn is(&self, text: &str) -> bool {
        self.text == text && self.kind != Kind::Str
    }

    pub fn is_word(&self) -> bool {
        self.kind == Kind::Word
    }
}

const PUNCT: &[&str] = &[
    "<<=", ">>=", "...", "===", "!==", "**=", "//=", "->", "=>", "::", ":=", "==", "!=", "<=", ">=",
    "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "**", "?.", "??",
];

fn is_word_start(c: char, lang: Language) -> bool {
    c.is_alphabetic() || c == '_' || (c == '$' && lang == Language::JavaScript)
}

fn is_word_char(c: char, lang: Language) -> bool {
    c.is_alphanumeric() || c == '_' || (c == '$' && lang == Language::JavaScript)
}

struct Lexer<'a> {
    src: &'a str,
    lang: Language,
    pos: usize,
    line: u32,
    line_has_token: bool,
    continued: bool,
    indent: u32,
    out: Vec<Token<'a>>,
}

pub(crate) fn tokenize(src: &str, lang: Language) -> Vec<Token<'_>> {
    let mut lx = Lexer {
        src,
        lang,
        pos: 0,
        line: 1,
        line_has_token: false,
        continued: false,
        indent: 0,
        out: Vec::new(),
    };
    lx.indent = lx.measure_indent();
    lx.run();
    lx.out
}

impl<'a> Lexer<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn measure_indent(&self) -> u32 {
        let mut w = 0;
        for c in self.rest().chars() {
            match c {
                ' ' => w += 1,
                '\t' => w += 8,
                _ => break,
            }
        }
        w
    }

    fn newline(&mut self) {
        self.pos += 1;
        self.line += 1;
        self.line_has_token = false;
        self.indent = self.measure_indent();
    }

    /// Advances over `len` bytes that may contain newlines, keeping the line
    /// counter in sync.
    fn advance(&mut self, len: usize) {
        let end = (self.pos + len).min(self.src.len());
        self.line += self.src[self.pos..end].matches('\n').count() as u32;
        self.pos = end;
    }

    fn emit(&mut self, start: usize, kind: Kind, start_line: u32) {
        let line_start = !self.line_has_token && !self.continued;
        self.continued = false;
        self.out.push(Token {
            text: &self.src[start..self.pos],
            kind,
            line: start_line,
            end_line: self.line,
            line_start,
            indent: self.indent,
        });
        self.line_has_token = self.line == start_line;
        if self.line != start_line {
            // The token ran onto later lines; what follows it on its last
            // line is not a line start.
            self.line_has_token = true;
            self.indent = self.out.last().map_or(0, |t| t.indent);
        }
    }

    fn run(&mut self) {
        while let Some(c) = self.peek() {
            let start = self.pos;
            let line = self.line;
            match c {
                '\n' => self.newline(),
                '\\' if self.peek_at(1) == Some('\n') => {
                    self.pos += 1;
                    self.newline();
                    self.continued = true;
                }
                '\\' if self.rest().starts_with("\\\r\n") => {
                    self.pos += 2;
                    self.newline();
                    self.continued = true;
                }
                c if c.is_whitespace() => self.pos += c.len_utf8(),
                '#' if self.lang == Language::Python => self.skip_line(),
                '#' if self.lang.is_c_family() && !self.line_has_token => {
                    self.directive();
                    self.emit(start, Kind::Directive, line);
                }
                '/' if self.rest().starts_with("//") && self.lang != Language::Python => self.skip_line(),
                '/' if self.rest().starts_with("/*") && self.lang != Language::Python => {
                    let len = self.rest()[2..].find("*/").map_or(self.rest().len(), |i| i + 4);
                    self.advance(len);
                }
                '"' | '\'' => {
                    self.string(c);
                    self.emit(start, Kind::Str, line);
                }
                '`' if matches!(self.lang, Language::Go | Language::JavaScript) => {
                    self.backtick();
                    self.emit(start, Kind::Str, line);
                }
                '/' if self.lang == Language::JavaScript && self.regex_allowed() => {
                    self.regex();
                    self.emit(start, Kind::Str, line);
                }
                c if c.is_ascii_digit() || (c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit())) => {
                    self.number();
                    self.emit(start, Kind::Number, line);
                }
                c if is_word_start(c, self.lang) || (c == '#' && self.lang == Language::JavaScript) => {
                    if self.lang == Language::Python && self.string_prefix() {
                        continue;
                    }
                    self.pos += c.len_utf8();
                    while let Some(d) = self.peek().filter(|d| is_word_char(*d, self.lang)) {
                        self.pos += d.len_utf8();
                    }
                    self.emit(start, Kind::Word, line);
                }
                _ => {
                    let len = PUNCT
                        .iter()
                        .find(|p| self.rest().starts_with(**p))
                        .filter(|p| !(self.lang == Language::Python && **p == "//="))
                        .map_or(c.len_utf8(), |p| p.len());
                    self.pos += len;
                    self.emit(start, Kind::Punct, line);
                }
            }
        }
    }

    fn skip_line(&mut self) {
        self.pos += self.rest().find('\n').unwrap_or(self.rest().len());
    }

    fn directive(&mut self) {
        loop {
            let line_len = self.rest().find('\n').unwrap_or(self.rest().len());
            let continued = self.rest()[..line_len].trim_end().ends_with('\\');
            self.pos += line_len;
            if !continued || self.pos >= self.src.len() {
                break;
            }
            self.pos += 1;
            self.line += 1;
        }
    }

    /// Consumes a Python string prefix plus its literal if one starts here.
    fn string_prefix(&mut self) -> bool {
        let rest = self.rest();
        let plen = rest.chars().take_while(|c| "rRbBuUfF".contains(*c)).count();
        if plen == 0 || plen > 2 {
            return false;
        }
        match rest[plen..].chars().next() {
            Some(q @ ('"' | '\'')) => {
                let start = self.pos;
                let line = self.line;
                self.pos += plen;
                self.string(q);
                self.emit(start, Kind::Str, line);
                true
            }
            _ => false,
        }
    }

    fn string(&mut self, quote: char) {
        let triple: String = std::iter::repeat_n(quote, 3).collect();
        if self.lang == Language::Python && self.rest().starts_with(&triple) {
            let body = &self.rest()[3..];
            let mut i = 0;
            let bytes = body.as_bytes();
            while i < bytes.len() {
                if bytes[i] == b'\\' {
                    i += 2;
                    continue;
                }
                if body[i..].starts_with(&triple) {
                    self.advance(3 + i + 3);
                    return;
                }
                i += 1;
            }
            self.advance(self.rest().len());
            return;
        }
        self.pos += 1;
        while let Some(c) = self.peek() {
            match c {
                '\\' => {
                    self.pos += 1;
                    if let Some(d) = self.peek() {
                        if d == '\n' {
                            self.line += 1;
                        }
                        self.pos += d.len_utf8();
                    }
                }
                '\n' => return,
                c if c == quote => {
                    self.pos += 1;
                    return;
                }
                c => self.pos += c.len_utf8(),
            }
        }
    }

    fn backtick(&mut self) {
        self.pos += 1;
        let mut depth = 0u32;
        while let Some(c) = self.peek() {
            match c {
                '\\' if self.lang == Language::JavaScript => {
                    self.pos += 1;
                    if let Some(d) = self.peek() {
                        self.advance(d.len_utf8());
                    }
                }
                '$' if self.lang == Language::JavaScript && self.peek_at(1) == Some('{') => {
                    depth += 1;
                    self.pos += 2;
                }
                '}' if depth > 0 => {
                    depth -= 1;
                    self.pos += 1;
                }
                '`' if depth == 0 => {
                    self.pos += 1;
                    return;
                }
                c => self.advance(c.len_utf8()),
            }
        }
    }

    fn regex_allowed(&self) -> bool {
        match self.out.last() {
            None => true,
            Some(t) => match t.kind {
                Kind::Punct => !matches!(t.text, ")" | "]" | "}" | "++" | "--"),
                Kind::Word => matches!(t.text, "return" | "typeof" | "case" | "in" | "of" | "void" | "delete"),
                _ => false,
            },
        }
    }

    fn regex(&mut self) {
        self.pos += 1;
        let mut class = false;
        while let Some(c) = self.peek() {
            match c {
                '\\' => {
                    self.pos += 1;
                    if let Some(d) = self.peek().filter(|d| *d != '\n') {
                        self.pos += d.len_utf8();
                    }
                }
                '\n' => return,
                '[' => {
                    class = true;
                    self.pos += 1;
                }
                ']' => {
                    class = false;
                    self.pos += 1;
                }
                '/' if !class => {
                    self.pos += 1;
                    while let Some(f) = self.peek().filter(|f| f.is_ascii_alphabetic()) {
                        self.pos += f.len_utf8();
                    }
                    return;
                }
                c => self.pos += c.len_utf8(),
            }
        }
    }

    fn number(&mut self) {
        let mut prev = '\0';
        while let Some(c) = self.peek() {
            let exponent_sign = (c == '+' || c == '-') && matches!(prev, 'e' | 'E' | 'p' | 'P');
            let hex = self.rest().starts_with("0x") || self.rest().starts_with("0X");
            if c.is_ascii_alphanumeric() || c == '_' || c == '.' || (exponent_sign && !hex) {
                if c == '.' && self.peek_at(1) == Some('.') {
                    break;
                }
                self.pos += 1;
                prev = c;
            } else {
                break;
            }
        }
    }
}
