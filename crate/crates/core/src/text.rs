//! Shared helpers for the line-oriented input formats.

use std::fmt;

/// A diagnostic pointing at a 1-based line and column of an input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A meaningful input line: comments (`#` to end of line) and blank lines are
/// dropped, leading whitespace is remembered so columns stay accurate.
#[derive(Debug, Clone)]
pub struct Line<'a> {
    pub number: usize,
    pub indent: usize,
    pub text: &'a str,
}

impl<'a> Line<'a> {
    /// Column of a byte offset into `text`.
    pub fn col(&self, offset: usize) -> usize {
        self.indent + offset + 1
    }

    pub fn error(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError::new(self.number, self.col(offset), message)
    }

    /// Whitespace-separated words with their byte offsets.
    pub fn words(&self) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        let bytes = self.text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            let start = i;
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            if start < i {
                out.push((start, &self.text[start..i]));
            }
        }
        out
    }

    /// Offset of `needle` inside the line, for diagnostics.
    pub fn offset_of(&self, needle: &str) -> usize {
        self.text.find(needle).unwrap_or(0)
    }
}

pub fn lines(src: &str) -> Vec<Line<'_>> {
    src.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            let trimmed_start = body.trim_start();
            let indent = body.len() - trimmed_start.len();
            let text = trimmed_start.trim_end();
            if text.is_empty() {
                None
            } else {
                Some(Line { number: i + 1, indent, text })
            }
        })
        .collect()
}

/// Splits `a, b, c` at top-level commas (ignoring commas nested in brackets
/// or parentheses), returning trimmed pieces with their offsets in `s`.
pub fn split_top_level(s: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                push_trimmed(&mut out, s, start, i);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    push_trimmed(&mut out, s, start, s.len());
    out
}

fn push_trimmed<'a>(out: &mut Vec<(usize, &'a str)>, s: &'a str, start: usize, end: usize) {
    let piece = &s[start..end];
    let lead = piece.len() - piece.trim_start().len();
    let t = piece.trim();
    if !t.is_empty() {
        out.push((start + lead, t));
    }
}

/// Contents of a `{ ... }` group starting at the first `{` of `s`, with the
/// offset of the contents and the remainder after the closing brace.
pub fn braced(s: &str) -> Option<(usize, &str, &str)> {
    let open = s.find('{')?;
    let mut depth = 0;
    for (i, ch) in s[open..].char_indices() {
        match ch {
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    let end = open + i;
                    return Some((open + 1, &s[open + 1..end], &s[end + 1..]));
                }
            }
            _ => {}
        }
    }
    None
}
