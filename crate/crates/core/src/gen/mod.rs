//! Text artifacts derived from a checked model: relational DDL, one SQL
//! query per OLAP operation, a dashboard manifest and a requirements
//! document. Every generator is a pure function of the model's canonical
//! content, so reordering declarations does not change the output.

mod dashboard;
mod doc;
mod query;
mod schema;

use std::path::{Path, PathBuf};

pub use dashboard::gen_dashboard_manifest;
pub use doc::gen_requirements_doc;
pub use query::gen_olap_sql;
pub use schema::{gen_schema_sql, sql_type, table_order, SCHEMA_HEADER};

use crate::diag::Diagnostic;
use crate::model::{sorted, SpecificationModel};

/// Double-quoted SQL identifier.
pub fn ident(name: &str) -> String {
    format!("\"{}\"", name.replace('"', "\"\""))
}

/// Single-quoted SQL string literal.
pub fn string_literal(s: &str) -> String {
    format!("'{}'", s.replace('\'', "''"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Artifact {
    Sql,
    Queries,
    Dashboard,
    Doc,
}

impl Artifact {
    pub const ALL: [Artifact; 4] = [Artifact::Sql, Artifact::Queries, Artifact::Dashboard, Artifact::Doc];
}

/// Every generated file as `(relative path, contents)`, in a fixed order.
///
/// Operations that cannot be translated (such as underspecified ones) are
/// reported and skipped; the other files are still produced.
pub fn generate(model: &SpecificationModel, only: &[Artifact]) -> (Vec<(PathBuf, String)>, Vec<Diagnostic>) {
    let wants = |a: Artifact| only.is_empty() || only.contains(&a);
    let mut files = Vec::new();
    let mut diags = Vec::new();
    if wants(Artifact::Sql) {
        match gen_schema_sql(model) {
            Ok(sql) => files.push((PathBuf::from("schema.sql"), sql)),
            Err(d) => diags.push(d),
        }
    }
    if wants(Artifact::Queries) {
        for uc in &sorted(model).use_cases {
            for op in &uc.operations {
                match gen_olap_sql(model, &uc.id, &op.id) {
                    Ok(sql) => files.push((Path::new("queries").join(format!("{}__{}.sql", uc.id, op.id)), sql)),
                    Err(d) => diags.push(d),
                }
            }
        }
    }
    if wants(Artifact::Dashboard) {
        files.push((PathBuf::from("dashboard.json"), gen_dashboard_manifest(model)));
    }
    if wants(Artifact::Doc) {
        files.push((PathBuf::from("requirements.md"), gen_requirements_doc(model)));
    }
    (files, diags)
}
