//! Line-oriented text formats: trees, host presentations, ray specs,
//! witnesses, linkages and tribe archives, plus DOT export. Parsers reject
//! malformed input with diagnostics naming line numbers.

pub mod dot;
pub mod linkage_format;
pub mod presentation_format;
pub mod ray_format;
pub mod tree_format;
pub mod witness_format;

use std::fmt;

use thiserror::Error;

/// Parse diagnostic carrying the 1-based line number.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, msg: impl fmt::Display) -> ParseError {
        ParseError {
            line,
            msg: msg.to_string(),
        }
    }
}

/// Lines with comments and blanks stripped, keeping 1-based numbering.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}
