//! Built-in vocabularies, their alternative spellings, and the rules for
//! which ASL terms must be declared before use.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::OlapKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VocabCategory {
    DataEntitySubType,
    DataAttributeType,
    UIContainerSubType,
    UIComponentType,
    UIComponentSubType,
    UIComponentPartSubType,
    ActionType,
    UseCaseType,
}

impl VocabCategory {
    pub const ALL: [VocabCategory; 8] = [
        VocabCategory::DataEntitySubType,
        VocabCategory::DataAttributeType,
        VocabCategory::UIContainerSubType,
        VocabCategory::UIComponentType,
        VocabCategory::UIComponentSubType,
        VocabCategory::UIComponentPartSubType,
        VocabCategory::ActionType,
        VocabCategory::UseCaseType,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VocabCategory::DataEntitySubType => "DataEntitySubType",
            VocabCategory::DataAttributeType => "DataAttributeType",
            VocabCategory::UIContainerSubType => "UIContainerSubType",
            VocabCategory::UIComponentType => "UIComponentType",
            VocabCategory::UIComponentSubType => "UIComponentSubType",
            VocabCategory::UIComponentPartSubType => "UIComponentPartSubType",
            VocabCategory::ActionType => "ActionType",
            VocabCategory::UseCaseType => "UseCaseType",
        }
    }

    pub fn parse(word: &str) -> Option<VocabCategory> {
        VocabCategory::ALL.into_iter().find(|c| c.as_str() == word)
    }
}

impl fmt::Display for VocabCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const INTERACTIVE_CHART: &str = "InteractiveChart";
pub const BI_ANALYSIS: &str = "BIAnalysis";
pub const DIMENSION_REF_TYPE: &str = "_Dimension";

pub const BAR_CHART: &str = "InteractiveBarChart";
pub const LINE_CHART: &str = "InteractiveLineChart";
pub const PIE_CHART: &str = "InteractivePieChart";
pub const SCATTER_PLOT: &str = "InteractiveScatterPlot";
pub const GEO_MAP: &str = "InteractiveGeographicalMap";

pub const CHART_SUBTYPES: [&str; 5] = [BAR_CHART, LINE_CHART, PIE_CHART, SCATTER_PLOT, GEO_MAP];

pub const ENTITY_SUBTYPES: [&str; 2] = ["Dimension", "Fact"];
pub const ATTRIBUTE_TYPES: [&str; 9] =
    ["UUID", "Integer", "Decimal", "String", "Boolean", "Date", "Time", "DateTime", DIMENSION_REF_TYPE];
pub const CONTAINER_SUBTYPES: [&str; 2] = ["Dashboard", "Page"];
pub const COMPONENT_TYPES: [&str; 7] = ["Form", "List", "Detail", "Menu", "Card", INTERACTIVE_CHART, "Filter"];
pub const COMPONENT_SUBTYPES: [&str; 11] = [
    "Table",
    "Dropdown",
    "Range",
    "Search",
    "MasterDetail",
    "Nested",
    BAR_CHART,
    LINE_CHART,
    PIE_CHART,
    SCATTER_PLOT,
    GEO_MAP,
];
pub const PART_KINDS: [&str; 11] = [
    "Column", "X_Axis", "Y_Axis", "Value", "Area", "Legend", "Label", "Location", "Longitude", "Latitude", "Option",
];
pub const CHART_ACTIONS: [&str; 4] = ["DrillDown", "RealTimeDataUpdate", "ZoomAndPanUpdate", "TooltipAndHoverDetail"];
/// Chart actions plus OLAP operation kinds (`DrillDown` names both).
pub const ACTION_TYPES: [&str; 8] = [
    "DrillDown",
    "RealTimeDataUpdate",
    "ZoomAndPanUpdate",
    "TooltipAndHoverDetail",
    "Slice",
    "Dice",
    "RollUp",
    "Pivot",
];
pub const USE_CASE_TYPES: [&str; 5] = ["EntityCreate", "EntityRead", "EntityUpdate", "EntityDelete", BI_ANALYSIS];

pub fn builtins(category: VocabCategory) -> &'static [&'static str] {
    match category {
        VocabCategory::DataEntitySubType => &ENTITY_SUBTYPES,
        VocabCategory::DataAttributeType => &ATTRIBUTE_TYPES,
        VocabCategory::UIContainerSubType => &CONTAINER_SUBTYPES,
        VocabCategory::UIComponentType => &COMPONENT_TYPES,
        VocabCategory::UIComponentSubType => &COMPONENT_SUBTYPES,
        VocabCategory::UIComponentPartSubType => &PART_KINDS,
        VocabCategory::ActionType => &ACTION_TYPES,
        VocabCategory::UseCaseType => &USE_CASE_TYPES,
    }
}

pub fn is_builtin(category: VocabCategory, term: &str) -> bool {
    builtins(category).contains(&term)
}

/// Maps a surface spelling to its canonical built-in term, if it is one.
pub fn normalize(category: VocabCategory, surface: &str) -> Option<&'static str> {
    let alias = match (category, surface) {
        (VocabCategory::DataEntitySubType, "BI_Dimension") => Some("Dimension"),
        (VocabCategory::DataEntitySubType, "BI_Fact") => Some("Fact"),
        (VocabCategory::UseCaseType, "BI_Analysis") => Some(BI_ANALYSIS),
        (VocabCategory::ActionType, s) => olap_kind(s).map(OlapKind::as_str).or_else(|| chart_action(s)),
        _ => None,
    };
    alias.or_else(|| builtins(category).iter().copied().find(|b| *b == surface))
}

/// OLAP operation kinds under every spelling the languages use.
pub fn olap_kind(surface: &str) -> Option<OlapKind> {
    match surface {
        "Slice" | "BI_Slice" => Some(OlapKind::Slice),
        "Dice" | "BI_Dice" => Some(OlapKind::Dice),
        "RollUp" | "Roll-up" | "BI_Rollup" | "BI_RollUp" => Some(OlapKind::RollUp),
        "Drill-down" | "BI_DrillDown" => Some(OlapKind::DrillDown),
        "Pivot" | "BI_Pivot" => Some(OlapKind::Pivot),
        _ => None,
    }
}

/// Chart actions (closed set) under every spelling the languages use.
pub fn chart_action(surface: &str) -> Option<&'static str> {
    match surface {
        "DrillDown" | "DrillDownUpdate" => Some("DrillDown"),
        "RealTimeDataUpdate" => Some("RealTimeDataUpdate"),
        "ZoomAndPanUpdate" => Some("ZoomAndPanUpdate"),
        "TooltipAndHoverDetail" | "TooltipAndHoverDetails" | "TooltipAndHoverDetailShow" => {
            Some("TooltipAndHoverDetail")
        }
        _ => None,
    }
}

/// The component type a subtype belongs to by default.
pub fn default_component_type(sub_type: &str) -> Option<&'static str> {
    match sub_type {
        "Table" | "MasterDetail" | "Nested" => Some("List"),
        "Dropdown" | "Range" | "Search" => Some("Filter"),
        s if CHART_SUBTYPES.contains(&s) => Some(INTERACTIVE_CHART),
        _ => None,
    }
}

/// Terms the base ASL language knows without a type-extension declaration.
pub fn asl_base_term(category: VocabCategory, canonical: &str) -> bool {
    match category {
        VocabCategory::DataEntitySubType | VocabCategory::UIContainerSubType => false,
        VocabCategory::DataAttributeType => !matches!(canonical, "UUID" | DIMENSION_REF_TYPE),
        VocabCategory::UIComponentType => matches!(canonical, "Form" | "List" | "Detail" | "Menu"),
        VocabCategory::UIComponentSubType => matches!(canonical, "MasterDetail" | "Nested"),
        VocabCategory::UIComponentPartSubType => false,
        VocabCategory::ActionType => CHART_ACTIONS.contains(&canonical),
        VocabCategory::UseCaseType => canonical.starts_with("Entity"),
    }
}

/// The spelling ASL uses for a canonical built-in term.
pub fn asl_surface(category: VocabCategory, canonical: &str) -> String {
    let s = match (category, canonical) {
        (VocabCategory::DataEntitySubType, "Dimension") => "BI_Dimension",
        (VocabCategory::DataEntitySubType, "Fact") => "BI_Fact",
        (VocabCategory::UseCaseType, BI_ANALYSIS) => "BI_Analysis",
        (VocabCategory::ActionType, "Slice") => "BI_Slice",
        (VocabCategory::ActionType, "Dice") => "BI_Dice",
        (VocabCategory::ActionType, "RollUp") => "BI_Rollup",
        (VocabCategory::ActionType, "DrillDown") => "BI_DrillDown",
        (VocabCategory::ActionType, "Pivot") => "BI_Pivot",
        (_, other) => other,
    };
    s.to_string()
}

/// Description written next to a built-in term in the emitted ASL prelude.
pub fn prelude_description(category: VocabCategory, canonical: &str) -> Option<&'static str> {
    match (category, canonical) {
        (VocabCategory::DataEntitySubType, "Dimension") => Some("Dimension data entity sub type"),
        (VocabCategory::DataEntitySubType, "Fact") => Some("Fact data entity sub type"),
        (VocabCategory::DataAttributeType, DIMENSION_REF_TYPE) => {
            Some("Used to reference a Dimension on a data entity attribute")
        }
        (VocabCategory::ActionType, "Slice") => Some("This is a Slice operation"),
        (VocabCategory::ActionType, "Dice") => Some("This is a Dice operation"),
        (VocabCategory::ActionType, "DrillDown") => Some("This is a Drill-down operation"),
        (VocabCategory::ActionType, "RollUp") => Some("This is a Roll-up Operation"),
        (VocabCategory::ActionType, "Pivot") => Some("This is a Pivot operation"),
        (VocabCategory::UseCaseType, BI_ANALYSIS) => Some("Represents a data analytical use case"),
        _ => None,
    }
}
