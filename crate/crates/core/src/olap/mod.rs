//! Desk-scale execution of OLAP operations and measures over CSV data.
//!
//! A [`Cube`] holds one table per entity. Queries start from a
//! [`CubeView`] of a use case's data source, narrow it with [`slice`] and
//! [`dice`], and turn it into a [`ResultTable`] with [`aggregate`] or
//! [`summarize`]. Every measure is total: empty groups and division by zero
//! give [`Value::Null`] instead of failing.

mod cube;
mod query;
mod table;
mod value;

use thiserror::Error;

use crate::diag::Diagnostic;

pub use cube::{coerce, load_cube, load_tables, parse_primitive, Cube, Table};
pub use query::{aggregate, arith, dice, pivot, root_entity, root_measures, run_use_case, slice, summarize, Bindings, CubeView};
pub use table::ResultTable;
pub use value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("no value bound for parameter `{0}`; pass it with --bind")]
    UnboundParameter(String),
    #[error("bad value for `{name}`: {message}")]
    BadBinding { name: String, message: String },
    #[error("pivot needs a result with exactly two group keys, found {0}")]
    NotTwoDimensional(usize),
    #[error("unknown use case `{0}`")]
    UnknownUseCase(String),
    #[error("use case `{use_case}` has no operation `{operation}`")]
    UnknownOperation { use_case: String, operation: String },
    #[error("operation cannot be executed: {0}")]
    NotExecutable(String),
}

impl EngineError {
    pub fn code(&self) -> &'static str {
        match self {
            EngineError::UnboundParameter(_) => "ENG010",
            EngineError::BadBinding { .. } => "ENG011",
            EngineError::NotTwoDimensional(_) => "ENG020",
            EngineError::UnknownUseCase(_) | EngineError::UnknownOperation { .. } => "ENG030",
            EngineError::NotExecutable(_) => "ENG031",
        }
    }

    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic::error(self.code(), self.to_string(), None)
    }
}
