//! The style-independent specification model.
//!
//! Both front-ends produce a [`SpecificationModel`]; the analyzer, the OLAP
//! engine and the generators consume it. The model is a plain value: it
//! carries no source locations (those live in [`SourceMap`]) so that two
//! renderings of the same requirements compare equal.

mod canonical;
mod path;
mod resolve;
mod source_map;
pub mod vocab;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use canonical::{canonicalize, sorted, CANONICAL_HEADER};
pub use path::{is_identifier, AttributePath, PathError};
pub use resolve::{
    access_path, date_attribute, enum_attribute, hops_alias, label_attribute, primary_key,
    reachable_entities, resolve, Hop, ResolveError, ResolvedTarget,
};
pub use source_map::{key, SourceMap};
pub use vocab::VocabCategory;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpecificationModel {
    #[serde(default)]
    pub enumerations: Vec<DataEnumeration>,
    #[serde(default)]
    pub entities: Vec<DataEntity>,
    #[serde(default)]
    pub clusters: Vec<DataEntityCluster>,
    #[serde(default)]
    pub actors: Vec<Actor>,
    #[serde(default)]
    pub use_cases: Vec<UseCase>,
    #[serde(default)]
    pub ui_containers: Vec<UiContainer>,
    #[serde(default)]
    pub vocabulary_extensions: Vec<VocabularyExtension>,
}

impl SpecificationModel {
    pub fn is_empty(&self) -> bool {
        self.enumerations.is_empty()
            && self.entities.is_empty()
            && self.clusters.is_empty()
            && self.actors.is_empty()
            && self.use_cases.is_empty()
            && self.ui_containers.is_empty()
            && self.vocabulary_extensions.is_empty()
    }

    /// Appends every declaration of `other` (compilation units are concatenations).
    pub fn merge(&mut self, other: SpecificationModel) {
        self.enumerations.extend(other.enumerations);
        self.entities.extend(other.entities);
        self.clusters.extend(other.clusters);
        self.actors.extend(other.actors);
        self.use_cases.extend(other.use_cases);
        self.ui_containers.extend(other.ui_containers);
        self.vocabulary_extensions.extend(other.vocabulary_extensions);
    }

    pub fn entity(&self, id: &str) -> Option<&DataEntity> {
        self.entities.iter().find(|e| e.id == id)
    }

    pub fn enumeration(&self, id: &str) -> Option<&DataEnumeration> {
        self.enumerations.iter().find(|e| e.id == id)
    }

    pub fn cluster(&self, id: &str) -> Option<&DataEntityCluster> {
        self.clusters.iter().find(|c| c.id == id)
    }

    pub fn actor(&self, id: &str) -> Option<&Actor> {
        self.actors.iter().find(|a| a.id == id)
    }

    pub fn use_case(&self, id: &str) -> Option<&UseCase> {
        self.use_cases.iter().find(|u| u.id == id)
    }

    pub fn container(&self, id: &str) -> Option<&UiContainer> {
        self.ui_containers.iter().find(|c| c.id == id)
    }

    pub fn has_extension(&self, category: VocabCategory, id: &str) -> bool {
        self.vocabulary_extensions
            .iter()
            .any(|x| x.category == category && x.id == id)
    }

    /// True if `term` is a built-in of `category` or a declared extension.
    pub fn knows_term(&self, category: VocabCategory, term: &str) -> bool {
        vocab::is_builtin(category, term) || self.has_extension(category, term)
    }

    pub fn facts(&self) -> impl Iterator<Item = &DataEntity> {
        self.entities.iter().filter(|e| e.is_fact())
    }

    pub fn dimensions(&self) -> impl Iterator<Item = &DataEntity> {
        self.entities.iter().filter(|e| e.is_dimension())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DataEnumeration {
    pub id: String,
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityType {
    Reference,
    Master,
    Transaction,
}

impl EntityType {
    pub const ALL: [EntityType; 3] = [EntityType::Reference, EntityType::Master, EntityType::Transaction];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityType::Reference => "Reference",
            EntityType::Master => "Master",
            EntityType::Transaction => "Transaction",
        }
    }

    /// Accepts the canonical spellings plus `Transactional`.
    pub fn parse(word: &str) -> Option<EntityType> {
        match word {
            "Reference" => Some(EntityType::Reference),
            "Master" => Some(EntityType::Master),
            "Transaction" | "Transactional" => Some(EntityType::Transaction),
            _ => None,
        }
    }
}

impl fmt::Display for EntityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const SUBTYPE_DIMENSION: &str = "Dimension";
pub const SUBTYPE_FACT: &str = "Fact";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DataEntity {
    pub id: String,
    pub name: String,
    pub entity_type: EntityType,
    pub sub_type: Option<String>,
    pub attributes: Vec<DataAttribute>,
    pub description: Option<String>,
}

impl DataEntity {
    pub fn is_fact(&self) -> bool {
        self.sub_type.as_deref() == Some(SUBTYPE_FACT)
    }

    pub fn is_dimension(&self) -> bool {
        self.sub_type.as_deref() == Some(SUBTYPE_DIMENSION)
    }

    pub fn attribute(&self, id: &str) -> Option<&DataAttribute> {
        self.attributes.iter().find(|a| a.id == id)
    }

    /// Stored (non-measure) attributes, in declaration order.
    pub fn stored_attributes(&self) -> impl Iterator<Item = &DataAttribute> {
        self.attributes.iter().filter(|a| a.measure.is_none())
    }

    pub fn measures(&self) -> impl Iterator<Item = &DataAttribute> {
        self.attributes.iter().filter(|a| a.measure.is_some())
    }

    /// Attributes of type `DimensionRef`, in declaration order.
    pub fn dimension_refs(&self) -> impl Iterator<Item = (&DataAttribute, &str)> {
        self.attributes.iter().filter_map(|a| match &a.attr_type {
            AttributeType::DimensionRef { entity } => Some((a, entity.as_str())),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DataAttribute {
    pub id: String,
    pub name: String,
    pub attr_type: AttributeType,
    #[serde(default)]
    pub default_value: Option<Literal>,
    #[serde(default)]
    pub measure: Option<MeasureExpr>,
    #[serde(default)]
    pub constraints: Vec<Constraint>,
}

impl DataAttribute {
    pub fn new(id: impl Into<String>, attr_type: AttributeType) -> Self {
        let id = id.into();
        DataAttribute {
            name: id.clone(),
            id,
            attr_type,
            default_value: None,
            measure: None,
            constraints: Vec::new(),
        }
    }

    pub fn is_primary_key(&self) -> bool {
        self.constraints.contains(&Constraint::PrimaryKey)
    }

    pub fn is_not_null(&self) -> bool {
        self.is_primary_key() || self.constraints.contains(&Constraint::NotNull)
    }

    pub fn is_measure(&self) -> bool {
        self.measure.is_some()
    }

    /// Brings the constraint set into normal form.
    ///
    /// PrimaryKey implies NotNull and Unique, and a `DimensionRef(X)` implies
    /// `ForeignKey(X)`; implied constraints are dropped so that styles that
    /// spell them out compare equal to styles that do not. The remaining
    /// constraints are ordered PrimaryKey, NotNull, Unique, ForeignKey.
    pub fn normalize_constraints(&mut self) {
        let pk = self.constraints.contains(&Constraint::PrimaryKey);
        let implied_fk = match &self.attr_type {
            AttributeType::DimensionRef { entity } => Some(entity.clone()),
            _ => None,
        };
        let mut out: Vec<Constraint> = Vec::new();
        for c in self.constraints.drain(..) {
            let implied = match &c {
                Constraint::NotNull | Constraint::Unique => pk,
                Constraint::ForeignKey(t) => implied_fk.as_deref() == Some(t.as_str()),
                Constraint::PrimaryKey => false,
            };
            if !implied && !out.contains(&c) {
                out.push(c);
            }
        }
        out.sort();
        self.constraints = out;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PrimitiveType {
    #[serde(rename = "UUID")]
    Uuid,
    Integer,
    Decimal,
    String,
    Boolean,
    Date,
    Time,
    DateTime,
}

impl PrimitiveType {
    pub const ALL: [PrimitiveType; 8] = [
        PrimitiveType::Uuid,
        PrimitiveType::Integer,
        PrimitiveType::Decimal,
        PrimitiveType::String,
        PrimitiveType::Boolean,
        PrimitiveType::Date,
        PrimitiveType::Time,
        PrimitiveType::DateTime,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PrimitiveType::Uuid => "UUID",
            PrimitiveType::Integer => "Integer",
            PrimitiveType::Decimal => "Decimal",
            PrimitiveType::String => "String",
            PrimitiveType::Boolean => "Boolean",
            PrimitiveType::Date => "Date",
            PrimitiveType::Time => "Time",
            PrimitiveType::DateTime => "DateTime",
        }
    }

    pub fn parse(word: &str) -> Option<PrimitiveType> {
        PrimitiveType::ALL.into_iter().find(|p| p.as_str() == word)
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, PrimitiveType::Integer | PrimitiveType::Decimal)
    }
}

impl fmt::Display for PrimitiveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum AttributeType {
    Primitive {
        name: PrimitiveType,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        length: Option<u32>,
    },
    EnumerationRef { enumeration: String },
    DimensionRef { entity: String },
    /// A data attribute type introduced by a `DataAttributeType` extension.
    Extension { name: String },
}

impl AttributeType {
    pub fn primitive(name: PrimitiveType) -> Self {
        AttributeType::Primitive { name, length: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Constraint {
    PrimaryKey,
    NotNull,
    Unique,
    ForeignKey(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "camelCase")]
pub enum Literal {
    Number(f64),
    Text(String),
    Bool(bool),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Number(n) => write!(f, "{n}"),
            Literal::Text(s) => write!(f, "{}", quote(s)),
            Literal::Bool(true) => f.write_str("true"),
            Literal::Bool(false) => f.write_str("false"),
        }
    }
}

/// Double-quoted string literal with `\"`, `\\` and `\n` escapes.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum AggFn {
    Count,
    Sum,
    Average,
    Min,
    Max,
}

impl AggFn {
    pub fn as_str(self) -> &'static str {
        match self {
            AggFn::Count => "COUNT",
            AggFn::Sum => "SUM",
            AggFn::Average => "AVERAGE",
            AggFn::Min => "MIN",
            AggFn::Max => "MAX",
        }
    }

    /// Case-insensitive; `AVG` is accepted for AVERAGE.
    pub fn parse(word: &str) -> Option<AggFn> {
        match word.to_ascii_uppercase().as_str() {
            "COUNT" => Some(AggFn::Count),
            "SUM" => Some(AggFn::Sum),
            "AVERAGE" | "AVG" => Some(AggFn::Average),
            "MIN" => Some(AggFn::Min),
            "MAX" => Some(AggFn::Max),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ArithOp {
    #[serde(rename = "+")]
    Add,
    #[serde(rename = "-")]
    Sub,
    #[serde(rename = "*")]
    Mul,
    #[serde(rename = "/")]
    Div,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
        }
    }

    pub fn precedence(self) -> u8 {
        match self {
            ArithOp::Add | ArithOp::Sub => 1,
            ArithOp::Mul | ArithOp::Div => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "camelCase")]
pub enum MeasureExpr {
    Aggregate { func: AggFn, arg: AggArg },
    MeasureRef { id: String },
    Arithmetic { op: ArithOp, left: Box<MeasureExpr>, right: Box<MeasureExpr> },
    Literal { value: f64 },
    /// Expression text that could not be parsed; kept verbatim and never evaluated.
    Opaque { text: String },
}

impl MeasureExpr {
    pub fn arith(op: ArithOp, left: MeasureExpr, right: MeasureExpr) -> Self {
        MeasureExpr::Arithmetic { op, left: Box::new(left), right: Box::new(right) }
    }

    pub fn measure_refs(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let MeasureExpr::MeasureRef { id } = e {
                out.push(id.as_str());
            }
        });
        out
    }

    pub fn is_opaque(&self) -> bool {
        let mut opaque = false;
        self.walk(&mut |e| opaque |= matches!(e, MeasureExpr::Opaque { .. }));
        opaque
    }

    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a MeasureExpr)) {
        f(self);
        if let MeasureExpr::Arithmetic { left, right, .. } = self {
            left.walk(f);
            right.walk(f);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "camelCase")]
pub enum AggArg {
    Path(AttributePath),
    Predicate(Predicate),
}

/// `left = right`, the only comparison the languages define.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Predicate {
    pub left: AttributePath,
    pub right: Operand,
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.left, self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "camelCase")]
pub enum Operand {
    Path(AttributePath),
    Literal(Literal),
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Path(p) => write!(f, "{p}"),
            Operand::Literal(l) => write!(f, "{l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DataEntityCluster {
    pub id: String,
    pub name: String,
    pub entity_type: EntityType,
    pub main: String,
    pub uses: Vec<String>,
    pub description: Option<String>,
}

impl DataEntityCluster {
    pub fn members(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.main.as_str()).chain(self.uses.iter().map(String::as_str))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ActorType {
    User,
    ExternalSystem,
}

impl ActorType {
    pub fn as_str(self) -> &'static str {
        match self {
            ActorType::User => "User",
            ActorType::ExternalSystem => "ExternalSystem",
        }
    }

    pub fn parse(word: &str) -> Option<ActorType> {
        match word {
            "User" => Some(ActorType::User),
            "ExternalSystem" => Some(ActorType::ExternalSystem),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Actor {
    pub id: String,
    pub name: String,
    pub actor_type: ActorType,
    pub stakeholder: Option<String>,
    pub is_a: Option<String>,
    pub description: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UseCase {
    pub id: String,
    pub name: String,
    pub uc_type: String,
    pub stakeholder: Option<String>,
    pub primary_actor: Option<String>,
    #[serde(default)]
    pub supporting_actors: Vec<String>,
    pub data_source: Option<String>,
    /// Bare action kinds as listed by `actions ...` clauses.
    #[serde(default)]
    pub actions: Vec<OlapKind>,
    #[serde(default)]
    pub operations: Vec<OlapOperation>,
    #[serde(default)]
    pub tags: Vec<Tag>,
    pub description: Option<String>,
}

impl UseCase {
    pub fn operation(&self, id: &str) -> Option<&OlapOperation> {
        self.operations.iter().find(|o| o.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OlapKind {
    Slice,
    Dice,
    RollUp,
    DrillDown,
    Pivot,
}

impl OlapKind {
    pub const ALL: [OlapKind; 5] = [OlapKind::Slice, OlapKind::Dice, OlapKind::RollUp, OlapKind::DrillDown, OlapKind::Pivot];

    pub fn as_str(self) -> &'static str {
        match self {
            OlapKind::Slice => "Slice",
            OlapKind::Dice => "Dice",
            OlapKind::RollUp => "RollUp",
            OlapKind::DrillDown => "DrillDown",
            OlapKind::Pivot => "Pivot",
        }
    }

    pub fn is_filter(self) -> bool {
        matches!(self, OlapKind::Slice | OlapKind::Dice)
    }

    pub fn is_grouping(self) -> bool {
        matches!(self, OlapKind::RollUp | OlapKind::DrillDown)
    }
}

impl fmt::Display for OlapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "camelCase")]
pub enum OperationBody {
    Filter { predicates: Vec<Predicate> },
    GroupBy { path: AttributePath },
    Swap { first: String, second: String },
    /// Only the touched dimensions are known (decoded from ASL `BI-Action` tags).
    Underspecified { dimensions: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("a {kind} operation cannot carry {found}")]
pub struct BodyMismatch {
    pub kind: OlapKind,
    pub found: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OlapOperation {
    pub id: String,
    pub name: String,
    pub kind: OlapKind,
    pub body: OperationBody,
    pub description: Option<String>,
}

impl OlapOperation {
    /// Builds an operation whose body fits its kind: filters for Slice/Dice,
    /// a group-by for RollUp/DrillDown, a swap for Pivot. Any kind may be
    /// underspecified.
    pub fn new(id: impl Into<String>, kind: OlapKind, body: OperationBody) -> Result<Self, BodyMismatch> {
        let found = match (&body, kind) {
            (OperationBody::Underspecified { .. }, _) => None,
            (OperationBody::Filter { .. }, OlapKind::Slice | OlapKind::Dice) => None,
            (OperationBody::GroupBy { .. }, OlapKind::RollUp | OlapKind::DrillDown) => None,
            (OperationBody::Swap { .. }, OlapKind::Pivot) => None,
            (OperationBody::Filter { .. }, _) => Some("a where clause"),
            (OperationBody::GroupBy { .. }, _) => Some("a group-by clause"),
            (OperationBody::Swap { .. }, _) => Some("a swap clause"),
        };
        if let Some(found) = found {
            return Err(BodyMismatch { kind, found });
        }
        let id = id.into();
        Ok(OlapOperation { name: id.clone(), id, kind, body, description: None })
    }

    pub fn predicates(&self) -> &[Predicate] {
        match &self.body {
            OperationBody::Filter { predicates } => predicates,
            _ => &[],
        }
    }

    pub fn is_underspecified(&self) -> bool {
        matches!(self.body, OperationBody::Underspecified { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ContainerType {
    Window,
    MainWindow,
    ModalWindow,
}

impl ContainerType {
    pub fn as_str(self) -> &'static str {
        match self {
            ContainerType::Window => "Window",
            ContainerType::MainWindow => "MainWindow",
            ContainerType::ModalWindow => "ModalWindow",
        }
    }

    pub fn parse(word: &str) -> Option<ContainerType> {
        match word {
            "Window" => Some(ContainerType::Window),
            "MainWindow" => Some(ContainerType::MainWindow),
            "ModalWindow" => Some(ContainerType::ModalWindow),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UiContainer {
    pub id: String,
    pub name: String,
    pub container_type: ContainerType,
    pub sub_type: Option<String>,
    #[serde(default)]
    pub components: Vec<UiComponent>,
    #[serde(default)]
    pub events: Vec<UiEvent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UiComponent {
    pub id: String,
    pub name: String,
    pub component_type: String,
    pub sub_type: Option<String>,
    pub data_binding: Option<String>,
    #[serde(default)]
    pub parts: Vec<UiPart>,
    #[serde(default)]
    pub actions: Vec<ChartAction>,
    #[serde(default)]
    pub events: Vec<UiEvent>,
    pub navigates_to: Option<String>,
    #[serde(default)]
    pub tags: Vec<Tag>,
    pub description: Option<String>,
}

impl UiComponent {
    pub fn new(id: impl Into<String>, component_type: impl Into<String>) -> Self {
        let id = id.into();
        UiComponent {
            name: id.clone(),
            id,
            component_type: component_type.into(),
            sub_type: None,
            data_binding: None,
            parts: Vec::new(),
            actions: Vec::new(),
            events: Vec::new(),
            navigates_to: None,
            tags: Vec::new(),
            description: None,
        }
    }

    /// The chart subtype, present only on interactive charts.
    pub fn chart_subtype(&self) -> Option<&str> {
        if self.component_type == vocab::INTERACTIVE_CHART {
            self.sub_type.as_deref()
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UiPart {
    pub id: String,
    pub name: String,
    pub kind: String,
    pub binding: AttributePath,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChartAction {
    pub kind: String,
    #[serde(default)]
    pub event_type: Vec<String>,
    pub flow_to: Option<String>,
}

impl ChartAction {
    pub fn new(kind: impl Into<String>) -> Self {
        ChartAction { kind: kind.into(), event_type: Vec::new(), flow_to: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UiEvent {
    pub id: String,
    pub name: String,
    #[serde(default)]
    pub event_type: Vec<String>,
    pub flow_to: Option<String>,
    #[serde(default)]
    pub tags: Vec<Tag>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tag {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VocabularyExtension {
    pub category: VocabCategory,
    pub id: String,
    pub description: Option<String>,
}
