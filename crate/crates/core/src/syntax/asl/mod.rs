//! The ASL linguistic style: typed, bracketed declarations such as
//! `DataEntity City "City" : Reference : BI_Dimension [ ... ]`.

mod emit;
mod parse;

pub use emit::emit_asl;
pub use parse::{parse_asl, parse_asl_file};

pub const KEYWORDS: &[&str] = &[
    "DataEnumeration", "values", "DataEntity", "attribute", "constraints", "PrimaryKey", "NotNull", "Unique",
    "ForeignKey", "formula", "details", "arithmetic", "tag", "name", "value", "description", "defaultValue",
    "DataEntityCluster", "main", "uses", "Actor", "isA", "stakeholder", "UseCase", "actorInitiates",
    "supportingActors", "dataEntity", "actions", "action", "operation", "where", "and", "groupBy", "swap", "with",
    "dimensions", "component", "part", "dataBinding", "dataAttributeBinding", "event", "navigationFlowTo",
    "UIContainer", "DataEntitySubType", "DataAttributeType", "UIContainerSubType", "UIComponentType",
    "UIComponentSubType", "UIComponentPartSubType", "ActionType", "UseCaseType", "true", "false",
];

pub(crate) const DECLARATION_KEYWORDS: &[&str] = &[
    "DataEnumeration",
    "DataEntity",
    "DataEntityCluster",
    "Actor",
    "UseCase",
    "component",
    "UIContainer",
    "DataEntitySubType",
    "DataAttributeType",
    "UIContainerSubType",
    "UIComponentType",
    "UIComponentSubType",
    "UIComponentPartSubType",
    "ActionType",
    "UseCaseType",
];

/// Tag name prefix that carries an OLAP operation in a use case.
pub(crate) const BI_ACTION_TAG: &str = "BI-Action";
/// Tag name that carries a measure expression on an attribute.
pub(crate) const EXPRESSION_TAG: &str = "expression";
