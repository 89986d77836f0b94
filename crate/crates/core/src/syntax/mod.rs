//! Front-ends for the two linguistic styles.

pub mod asl;
pub mod cnlbi;
pub mod cursor;
pub mod expr;
pub mod lexer;

use std::path::Path;

use crate::diag::Diagnostic;
use crate::model::{SourceMap, SpecificationModel};

pub use lexer::{tokenize, LexConfig, Token, TokenKind};

/// Result of parsing one document.
#[derive(Debug, Clone, Default)]
pub struct Parsed {
    pub model: SpecificationModel,
    pub diagnostics: Vec<Diagnostic>,
    pub spans: SourceMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Syntax {
    Cnlbi,
    Asl,
}

impl Syntax {
    pub fn from_name(name: &str) -> Option<Syntax> {
        match name {
            "cnlbi" => Some(Syntax::Cnlbi),
            "asl" => Some(Syntax::Asl),
            _ => None,
        }
    }

    pub fn from_path(path: &Path) -> Option<Syntax> {
        Syntax::from_name(path.extension()?.to_str()?)
    }

    pub fn extension(self) -> &'static str {
        match self {
            Syntax::Cnlbi => "cnlbi",
            Syntax::Asl => "asl",
        }
    }

    pub fn parse(self, source: &str, file: u32) -> Parsed {
        match self {
            Syntax::Cnlbi => cnlbi::parse_cnlbi_file(source, file),
            Syntax::Asl => asl::parse_asl_file(source, file),
        }
    }

    /// Canonical text for `model` plus any warnings about content the style
    /// cannot express.
    pub fn emit(self, model: &SpecificationModel) -> (String, Vec<Diagnostic>) {
        match self {
            Syntax::Cnlbi => cnlbi::emit_cnlbi(model),
            Syntax::Asl => (asl::emit_asl(model), Vec::new()),
        }
    }
}

pub const CNL_LEX: LexConfig = LexConfig {
    keywords: cnlbi::KEYWORDS,
    hyphen_words: &["Roll-up", "Drill-down", "x-axis", "y-axis"],
    unterminated_code: "CNL001",
    invalid_char_code: "CNL002",
};

pub const ASL_LEX: LexConfig = LexConfig {
    keywords: asl::KEYWORDS,
    hyphen_words: &[],
    unterminated_code: "ASL001",
    invalid_char_code: "ASL002",
};

pub use asl::{emit_asl, parse_asl, parse_asl_file};
pub use cnlbi::{emit_cnlbi, parse_cnlbi, parse_cnlbi_file};
