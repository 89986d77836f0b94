//! Source spans and diagnostics shared by every stage of the pipeline.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A region of one input file. Lines and columns are 1-based; columns count
/// characters, offsets count bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Span {
    pub file: u32,
    pub offset: usize,
    pub len: usize,
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn end(&self) -> usize {
        self.offset + self.len
    }

    /// Smallest span covering both `self` and `other` (same file assumed).
    pub fn to(&self, other: Span) -> Span {
        if other.end() <= self.offset {
            return other.to(*self);
        }
        Span {
            len: other.end().max(self.end()) - self.offset,
            ..*self
        }
    }

    /// The source text this span covers, if it lies inside `source`.
    pub fn slice<'a>(&self, source: &'a str) -> Option<&'a str> {
        source.get(self.offset..self.end())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => f.write_str("error"),
            Severity::Warning => f.write_str("warning"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    pub span: Option<Span>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub related_spans: Vec<Span>,
}

impl Diagnostic {
    pub fn error(code: impl Into<String>, message: impl Into<String>, span: Option<Span>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code: code.into(),
            message: message.into(),
            span,
            related_spans: Vec::new(),
        }
    }

    pub fn warning(code: impl Into<String>, message: impl Into<String>, span: Option<Span>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            ..Diagnostic::error(code, message, span)
        }
    }

    pub fn with_related(mut self, span: Option<Span>) -> Self {
        self.related_spans.extend(span);
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// One JSON object per diagnostic: `{code, severity, file, line, col, offset, len, message}`.
    pub fn to_json_line(&self, file_name: &str) -> String {
        let span = self.span.unwrap_or_default();
        serde_json::json!({
            "code": self.code,
            "severity": self.severity,
            "file": file_name,
            "line": span.line,
            "col": span.col,
            "offset": span.offset,
            "len": span.len,
            "message": self.message,
        })
        .to_string()
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(span) = self.span {
            write!(f, "{}:{}: ", span.line, span.col)?;
        }
        write!(f, "{}[{}]: {}", self.severity, self.code, self.message)
    }
}

/// Stable diagnostic order: by file, then span start, then code. Diagnostics
/// without a span sort after those with one.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| {
        let key = |d: &Diagnostic| {
            (
                d.span.is_none(),
                d.span.map(|s| (s.file, s.offset)).unwrap_or_default(),
            )
        };
        key(a)
            .cmp(&key(b))
            .then_with(|| a.code.cmp(&b.code))
            .then_with(|| a.message.cmp(&b.message))
    });
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

/// Input files of one compilation unit, indexed by `Span::file`.
#[derive(Debug, Clone, Default)]
pub struct SourceFiles {
    files: Vec<(String, String)>,
}

impl SourceFiles {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: impl Into<String>, text: impl Into<String>) -> u32 {
        self.files.push((name.into(), text.into()));
        (self.files.len() - 1) as u32
    }

    pub fn name(&self, file: u32) -> &str {
        self.files.get(file as usize).map(|f| f.0.as_str()).unwrap_or("<input>")
    }

    pub fn text(&self, file: u32) -> &str {
        self.files.get(file as usize).map(|f| f.1.as_str()).unwrap_or("")
    }

    pub fn len(&self) -> usize {
        self.files.len()
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    /// Human-readable rendering with the offending line and a caret marker.
    pub fn render(&self, diag: &Diagnostic, color: bool) -> String {
        let (sev_on, bold, off) = match (color, diag.severity) {
            (false, _) => ("", "", ""),
            (true, Severity::Error) => ("\x1b[1;31m", "\x1b[1m", "\x1b[0m"),
            (true, Severity::Warning) => ("\x1b[1;33m", "\x1b[1m", "\x1b[0m"),
        };
        let mut out = String::new();
        match diag.span {
            Some(span) => {
                out.push_str(&format!(
                    "{bold}{}:{}:{}:{off} {sev_on}{}[{}]{off}: {}\n",
                    self.name(span.file),
                    span.line,
                    span.col,
                    diag.severity,
                    diag.code,
                    diag.message
                ));
                let text = self.text(span.file);
                if let Some(line) = text.lines().nth(span.line.saturating_sub(1) as usize) {
                    let width = text
                        .get(span.offset..span.end())
                        .map(|s| s.lines().next().unwrap_or("").chars().count())
                        .unwrap_or(1)
                        .max(1);
                    out.push_str(&format!("  | {line}\n"));
                    out.push_str(&format!(
                        "  | {}{sev_on}{}{off}\n",
                        " ".repeat(span.col.saturating_sub(1) as usize),
                        "^".repeat(width)
                    ));
                }
            }
            None => out.push_str(&format!(
                "{sev_on}{}[{}]{off}: {}\n",
                diag.severity, diag.code, diag.message
            )),
        }
        out
    }
}
