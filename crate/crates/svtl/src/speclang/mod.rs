//! The surface language: a small declaration syntax for models.
//!
//! A source file is a sequence of declarations. `;` starts a comment that
//! runs to the end of the line. There are no statement terminators: every
//! form either is bracketed or ends where the next keyword begins.
//!
//! ```text
//! domain proc = {1, 2}
//!
//! alphabet {
//!   (sched p) for p in proc
//! }
//!
//! var turn : rat init 1 {
//!   on (sched 1) -> 2
//!   otherwise -> 1
//! }
//!
//! forall p in proc {
//!   guard (sched p) when turn = p
//!   var X_p : bool init false {
//!     on (sched p) -> true
//!     otherwise -> false
//!   }
//! }
//!
//! property live_1 = always eventually X_1
//! ```
//!
//! Loading a file parses it, expands `forall` quantifiers, resolves names,
//! checks sorts, and produces a [`Model`]. All positions in error messages
//! are 1-based line:column pairs.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::kernel::Model;

pub mod ast;
mod expand;
mod lexer;
mod parser;
mod printer;
mod statics;

pub use parser::parse;
pub use printer::pretty_print;

/// One error with a source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl Diagnostic {
    pub fn new(span: ast::Span, message: impl Into<String>) -> Self {
        Diagnostic {
            line: span.line,
            col: span.col,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

/// Failure loading a model from source.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}", format_diagnostics(.0))]
    Diagnostics(Vec<Diagnostic>),
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(Diagnostic::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

/// Expand quantifiers, resolve names, check sorts, and lower to a model.
pub fn check(source: &ast::SourceModel) -> Result<Model, LoadError> {
    statics::check(source).map_err(LoadError::Diagnostics)
}

/// Parse and check a model from source text.
pub fn load_str(src: &str) -> Result<Model, LoadError> {
    check(&parse(src)?)
}

/// Parse and check a model from a file.
pub fn load_file(path: impl AsRef<Path>) -> Result<Model, LoadError> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_str(&src)
}
