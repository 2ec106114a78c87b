//! Knowledge-base text format.
//!
//! ```text
//! # Nixon
//! fact quaker.
//! fact republican.
//! rule r1: if quaker then pacifist weight 0.9 nocontra.
//! rule r2: if republican then !pacifist weight 0.8 nocontra priority 1.
//! default d1: quaker : pacifist / pacifist.
//! ```
//!
//! Formula operators from loosest to tightest: `->` (right associative),
//! `|`, `&`, prefix `!`. Atoms are identifiers; `true` and `false` are
//! constants.

mod kb;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

pub use kb::{DefaultDecl, KnowledgeBase, ModelKind, NumericRule};
pub use parser::{parse_formula, parse_kb};

/// Words with a fixed meaning in the knowledge-base syntax; none can name an atom.
pub const KEYWORDS: &[&str] =
    &["true", "false", "fact", "rule", "default", "if", "then", "weight", "contra", "nocontra", "priority"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    ReservedAtom,
    DuplicateName,
    WeightOutOfRange,
}

/// A syntax or validation error at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub message: String,
    pub snippet: String,
}

impl ParseError {
    pub(crate) fn new(
        line: usize,
        column: usize,
        kind: ParseErrorKind,
        message: impl Into<String>,
        snippet: impl Into<String>,
    ) -> Self {
        ParseError { line, column, kind, message: message.into(), snippet: snippet.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.snippet.is_empty() {
            write!(f, " (at `{}`)", self.snippet)?;
        }
        Ok(())
    }
}
