//! The CNL-BI linguistic style: English-like sentences such as
//! `DataEntity City is a Reference Dimension with attributes ...`.

mod emit;
mod parse;

pub use emit::emit_cnlbi;
pub use parse::{parse_cnlbi, parse_cnlbi_file};

pub const KEYWORDS: &[&str] = &[
    "Data", "enumeration", "with", "values", "and", "DataEntity", "is", "a", "an", "Reference", "Master",
    "Transaction", "Transactional", "Dimension", "Fact", "attributes", "refers", "to", "described", "as",
    "PrimaryKey", "NotNull", "Unique", "ForeignKey", "operation", "default", "UUID", "Integer", "Decimal",
    "String", "Boolean", "Date", "Time", "DateTime", "Actor", "User", "ExternalSystem", "extends",
    "stakeholder", "UseCase", "actor", "support", "supporting", "data", "source", "actions", "performs",
    "OLAP", "Olap", "Operation", "where", "group", "by", "swap", "Slice", "Dice", "Roll-up", "Drill-down",
    "Pivot", "DataEntityCluster", "cluster", "main", "uses", "Vocabulary", "UIContainer", "Main", "Modal",
    "Window", "that", "contains", "navigates", "UIComponent", "binding", "columns", "column", "x-axis",
    "y-axis", "value", "label", "labels", "segments", "defined", "legend", "latitude", "longitude",
    "location", "option", "options", "area", "starting", "ending", "at", "true", "false",
];

/// Words that open a top-level declaration.
pub(crate) const DECLARATION_KEYWORDS: &[&str] =
    &["Data", "DataEntity", "Actor", "UseCase", "UIContainer", "DataEntityCluster", "Vocabulary"];

/// Part clause keywords and the part kind each introduces.
pub(crate) const PART_CLAUSES: &[(&str, &str)] = &[
    ("columns", "Column"),
    ("column", "Column"),
    ("x-axis", "X_Axis"),
    ("y-axis", "Y_Axis"),
    ("values", "Value"),
    ("value", "Value"),
    ("labels", "Label"),
    ("label", "Label"),
    ("legend", "Legend"),
    ("latitude", "Latitude"),
    ("longitude", "Longitude"),
    ("location", "Location"),
    ("options", "Option"),
    ("option", "Option"),
    ("area", "Area"),
];

/// Article to put before `word`.
pub(crate) fn article(word: &str) -> &'static str {
    match word.chars().next() {
        Some('A' | 'E' | 'I' | 'O' | 'a' | 'e' | 'i' | 'o') => "an",
        _ => "a",
    }
}
