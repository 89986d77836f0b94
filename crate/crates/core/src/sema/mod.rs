//! Name resolution and domain validation over a parsed model.
//!
//! Each `check_*` function is a pure function of the model and returns its
//! own diagnostics; [`check`] runs them all and decides whether the model is
//! sound enough to hand to the engine and generators.

mod dimensional;
mod ids;
mod measures;
mod types;
mod ui;
mod use_cases;
mod vocabulary;

use serde::Serialize;

use crate::diag::{has_errors, sort_diagnostics, Diagnostic, Span};
use crate::model::{SourceMap, SpecificationModel};

pub use dimensional::{check_dimensional, schema_shape, SchemaShape};
pub use ids::check_ids;
pub use measures::{check_measures, measure_type};
pub use types::Ty;
pub use ui::check_ui;
pub use use_cases::{check_use_cases, predicate_parameter, RESTRICTION_WORDS};
pub use vocabulary::check_vocabulary;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub diagnostics: Vec<Diagnostic>,
    /// Present iff no diagnostic is an error.
    pub resolved_model: Option<SpecificationModel>,
    pub shape: SchemaShape,
}

impl CheckReport {
    pub fn has_errors(&self) -> bool {
        has_errors(&self.diagnostics)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.is_error())
    }
}

/// Runs every check. Diagnostics are sorted by file, span and code.
pub fn check(model: &SpecificationModel, spans: &SourceMap) -> CheckReport {
    let mut diagnostics = Vec::new();
    diagnostics.extend(check_ids(model, spans));
    diagnostics.extend(check_vocabulary(model, spans));
    diagnostics.extend(check_dimensional(model, spans));
    diagnostics.extend(check_measures(model, spans));
    diagnostics.extend(check_use_cases(model, spans));
    diagnostics.extend(check_ui(model, spans));
    sort_diagnostics(&mut diagnostics);
    diagnostics.dedup();
    let resolved_model = (!has_errors(&diagnostics)).then(|| model.clone());
    CheckReport { diagnostics, resolved_model, shape: schema_shape(model) }
}

/// Collects diagnostics for one check.
struct Sink<'a> {
    spans: &'a SourceMap,
    out: Vec<Diagnostic>,
}

impl<'a> Sink<'a> {
    fn new(spans: &'a SourceMap) -> Self {
        Sink { spans, out: Vec::new() }
    }

    /// First span recorded under any of `keys`.
    fn at(&self, keys: &[String]) -> Option<Span> {
        self.spans.first_of(keys)
    }

    fn error(&mut self, code: &str, message: impl Into<String>, keys: &[String]) {
        let span = self.at(keys);
        self.out.push(Diagnostic::error(code, message, span));
    }

    fn warning(&mut self, code: &str, message: impl Into<String>, keys: &[String]) {
        let span = self.at(keys);
        self.out.push(Diagnostic::warning(code, message, span));
    }

    fn error_at(&mut self, code: &str, message: impl Into<String>, span: Option<Span>) {
        self.out.push(Diagnostic::error(code, message, span));
    }

    fn finish(self) -> Vec<Diagnostic> {
        self.out
    }
}
