//! Text formats: the graph DSL (`.og`, `.cg`) and the JSON report.
//!
//! ```text
//! objectgraph := "graph" ident "{" { node | arc } "}"
//! node        := "node" ident "{" { ident "=" literal [";"] } "}"
//! arc         := "arc" ident ":" ident "->" ident "{" { ident "=" literal [";"] } "}"
//!
//! classgraph  := "schema" ident "{" { class | classarc } "}"
//! class       := "class" ident "{" { ident ":" pred [";"] } "}"
//! classarc    := "arc" ident ":" ident "->" ident "{" { ident ":" pred [";"] } "}"
//! ```
//!
//! `literal` is a string, number, `true`, `false` or an inline object
//! `{ name = literal; ... }`; `pred` is the predicate grammar of
//! [`crate::predicate`]. A `;` may be left out before `}`. Comments run from
//! `#` to the end of the line.
//!
//! The graph name is not part of the model, so printing always emits
//! `graph g` / `schema s`.

mod parse;
mod print;
mod report;

use std::fmt;

use crate::syntax::{SourceSpan, SyntaxError};

pub use parse::{
    parse_class_graph, parse_class_graph_named, parse_object_graph, parse_object_graph_named,
};
pub use print::{print_class_graph, print_object_graph};
pub use report::{emit_report, parse_report, ReportError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: SourceSpan,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.span, self.severity, self.message)
    }
}

impl From<SyntaxError> for Diagnostic {
    fn from(e: SyntaxError) -> Self {
        let mut message = e.message;
        if !e.expected.is_empty() {
            message.push_str(&format!(" (expected {})", e.expected.join(", ")));
        }
        Diagnostic {
            severity: Severity::Error,
            message,
            span: e.span,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParseDiagnostics {
    pub items: Vec<Diagnostic>,
}

impl ParseDiagnostics {
    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.items.iter().filter(|d| d.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Diagnostic> {
        self.items.iter().filter(|d| d.severity == Severity::Warning)
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

impl fmt::Display for ParseDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.items {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

/// `value` is `Some` exactly when `diagnostics` has no errors.
#[derive(Clone, Debug)]
pub struct ParseOutcome<T> {
    pub value: Option<T>,
    pub diagnostics: ParseDiagnostics,
}

impl<T> ParseOutcome<T> {
    /// The parsed value, or the diagnostics if there were errors.
    pub fn into_result(self) -> Result<T, ParseDiagnostics> {
        self.value.ok_or(self.diagnostics)
    }
}
