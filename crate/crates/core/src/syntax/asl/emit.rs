use std::collections::BTreeSet;

use crate::model::vocab::{self, VocabCategory};
use crate::model::{
    quote, sorted, Actor, AttributeType, ChartAction, Constraint, DataAttribute, DataEntity, DataEntityCluster,
    DataEnumeration, MeasureExpr, OlapKind, OlapOperation, OperationBody, SpecificationModel, Tag, UiComponent,
    UiContainer, UiEvent, UseCase,
};
use crate::syntax::expr::format_expr;

use super::{BI_ACTION_TAG, EXPRESSION_TAG};

/// Canonical ASL text for `model`.
///
/// The document opens with a declaration for every vocabulary term the model
/// uses that base ASL does not know, followed by the model's own extensions,
/// then enumerations, entities, clusters, actors, use cases and containers,
/// each sorted by id. Components are written inline in their container.
pub fn emit_asl(model: &SpecificationModel) -> String {
    let m = sorted(model);
    let mut blocks: Vec<String> = Vec::new();
    let prelude = prelude(&m);
    if !prelude.is_empty() {
        blocks.push(prelude.join("\n"));
    }
    blocks.extend(m.enumerations.iter().map(enumeration));
    blocks.extend(m.entities.iter().map(entity));
    blocks.extend(m.clusters.iter().map(cluster));
    blocks.extend(m.actors.iter().map(actor));
    blocks.extend(m.use_cases.iter().map(use_case));
    blocks.extend(m.ui_containers.iter().map(container));
    let mut text = blocks.join("\n\n");
    if !text.is_empty() {
        text.push('\n');
    }
    text
}

fn prelude(m: &SpecificationModel) -> Vec<String> {
    let mut used: BTreeSet<(VocabCategory, String)> = BTreeSet::new();
    let mut use_term = |cat: VocabCategory, term: &str| {
        used.insert((cat, term.to_string()));
    };
    for e in &m.entities {
        if let Some(st) = &e.sub_type {
            use_term(VocabCategory::DataEntitySubType, st);
        }
        for a in &e.attributes {
            match &a.attr_type {
                AttributeType::Primitive { name, .. } => use_term(VocabCategory::DataAttributeType, name.as_str()),
                AttributeType::DimensionRef { .. } => use_term(VocabCategory::DataAttributeType, vocab::DIMENSION_REF_TYPE),
                AttributeType::Extension { name } => use_term(VocabCategory::DataAttributeType, name),
                AttributeType::EnumerationRef { .. } => {}
            }
        }
    }
    for uc in &m.use_cases {
        use_term(VocabCategory::UseCaseType, &uc.uc_type);
        for k in uc.actions.iter().chain(uc.operations.iter().map(|o| &o.kind)) {
            use_term(VocabCategory::ActionType, k.as_str());
        }
    }
    for c in &m.ui_containers {
        if let Some(st) = &c.sub_type {
            use_term(VocabCategory::UIContainerSubType, st);
        }
        for comp in &c.components {
            use_term(VocabCategory::UIComponentType, &comp.component_type);
            if let Some(st) = &comp.sub_type {
                use_term(VocabCategory::UIComponentSubType, st);
            }
            for p in &comp.parts {
                use_term(VocabCategory::UIComponentPartSubType, &p.kind);
            }
        }
    }

    let mut lines = Vec::new();
    for category in VocabCategory::ALL {
        // Built-ins first, in vocabulary order, then anything else the model uses.
        for term in vocab::builtins(category) {
            // `DrillDown` is a base chart action, but as an OLAP kind it is declared like the others.
            let olap = category == VocabCategory::ActionType && vocab::olap_kind(&vocab::asl_surface(category, term)).is_some();
            if used.contains(&(category, term.to_string())) && (olap || !vocab::asl_base_term(category, term)) {
                let surface = vocab::asl_surface(category, term);
                lines.push(declaration(category, &surface, vocab::prelude_description(category, term)));
            }
        }
        for x in m.vocabulary_extensions.iter().filter(|x| x.category == category) {
            lines.push(declaration(category, &x.id, x.description.as_deref()));
        }
        for (_, term) in used.iter().filter(|(c, _)| *c == category) {
            let builtin = vocab::is_builtin(category, term);
            let extension = m.vocabulary_extensions.iter().any(|x| x.category == category && &x.id == term);
            if !builtin && !extension && !vocab::asl_base_term(category, term) {
                lines.push(declaration(category, term, None));
            }
        }
    }
    lines
}

fn declaration(category: VocabCategory, term: &str, description: Option<&str>) -> String {
    match description {
        Some(d) => format!("{category} {term} [description {}]", quote(d)),
        None => format!("{category} {term}"),
    }
}

fn named(id: &str, name: &str) -> String {
    format!("{id} {}", quote(name))
}

fn maybe_named(id: &str, name: &str) -> String {
    if id == name {
        id.to_string()
    } else {
        named(id, name)
    }
}

/// `[ items ]` on one line, or nothing when there are no items.
fn inline_items(items: &[String]) -> String {
    if items.is_empty() {
        String::new()
    } else {
        format!(" [{}]", items.join(" "))
    }
}

/// A multi-line bracketed body with the closing `]` on the last item.
fn block(head: String, items: Vec<String>, indent: &str) -> String {
    if items.is_empty() {
        return format!("{head} [ ]");
    }
    let mut s = format!("{head} [");
    for item in &items {
        s.push('\n');
        s.push_str(indent);
        s.push_str(item);
    }
    s.push_str(" ]");
    s
}

fn description(d: &str) -> String {
    format!("description {}", quote(d))
}

fn tag(t: &Tag) -> String {
    format!("tag (name {} value {})", quote(&t.name), quote(&t.value))
}

fn kind_surface(k: OlapKind) -> String {
    vocab::asl_surface(VocabCategory::ActionType, k.as_str())
}

fn enumeration(x: &DataEnumeration) -> String {
    format!("DataEnumeration {} values ({})", maybe_named(&x.id, &x.name), x.values.join(", "))
}

fn entity(x: &DataEntity) -> String {
    let mut head = format!("DataEntity {} : {}", named(&x.id, &x.name), x.entity_type);
    if let Some(st) = &x.sub_type {
        head.push_str(" : ");
        head.push_str(&vocab::asl_surface(VocabCategory::DataEntitySubType, st));
    }
    let mut items: Vec<String> = x.attributes.iter().map(attribute).collect();
    items.extend(x.description.as_deref().map(description));
    block(head, items, "  ")
}

fn attribute(a: &DataAttribute) -> String {
    let ty = match &a.attr_type {
        AttributeType::Primitive { name, length: Some(n) } => format!("{name}({n})"),
        AttributeType::Primitive { name, length: None } => name.to_string(),
        AttributeType::EnumerationRef { enumeration } => format!("DataEnumeration {enumeration}"),
        AttributeType::DimensionRef { .. } => vocab::DIMENSION_REF_TYPE.to_string(),
        AttributeType::Extension { name } => name.clone(),
    };
    let mut constraints: Vec<String> = a
        .constraints
        .iter()
        .map(|c| match c {
            Constraint::PrimaryKey => "PrimaryKey".to_string(),
            Constraint::NotNull => "NotNull".to_string(),
            Constraint::Unique => "Unique".to_string(),
            Constraint::ForeignKey(t) => format!("ForeignKey({t})"),
        })
        .collect();
    if let AttributeType::DimensionRef { entity } = &a.attr_type {
        constraints.push(format!("ForeignKey({entity})"));
    }
    let mut items = Vec::new();
    if !constraints.is_empty() {
        items.push(format!("constraints ({})", constraints.join(" ")));
    }
    match &a.measure {
        Some(MeasureExpr::Opaque { text }) => items.push(tag(&Tag { name: EXPRESSION_TAG.into(), value: text.clone() })),
        Some(e) => items.push(format!("formula arithmetic ({})", format_expr(e))),
        None => {}
    }
    if let Some(d) = &a.default_value {
        items.push(format!("defaultValue {d}"));
    }
    format!("attribute {} : {ty}{}", maybe_named(&a.id, &a.name), inline_items(&items))
}

fn cluster(x: &DataEntityCluster) -> String {
    let head = format!("DataEntityCluster {} : {}", named(&x.id, &x.name), x.entity_type);
    let mut items = vec![format!("main {}", x.main)];
    if !x.uses.is_empty() {
        items.push(format!("uses {}", x.uses.join(", ")));
    }
    items.extend(x.description.as_deref().map(description));
    block(head, items, "  ")
}

fn actor(x: &Actor) -> String {
    let mut items = Vec::new();
    if let Some(p) = &x.is_a {
        items.push(format!("isA {p}"));
    }
    if let Some(s) = &x.stakeholder {
        items.push(format!("stakeholder {s}"));
    }
    items.extend(x.description.as_deref().map(description));
    let items = if items.is_empty() { String::new() } else { format!(" [ {} ]", items.join(" ")) };
    format!("Actor {} : {}{items}", maybe_named(&x.id, &x.name), x.actor_type.as_str())
}

fn use_case(x: &UseCase) -> String {
    let head = format!(
        "UseCase {} : {}",
        named(&x.id, &x.name),
        vocab::asl_surface(VocabCategory::UseCaseType, &x.uc_type)
    );
    let mut items = Vec::new();
    if let Some(a) = &x.primary_actor {
        items.push(format!("actorInitiates {a}"));
    }
    if !x.supporting_actors.is_empty() {
        items.push(format!("supportingActors {}", x.supporting_actors.join(", ")));
    }
    if let Some(s) = &x.stakeholder {
        items.push(format!("stakeholder {s}"));
    }
    if let Some(d) = &x.data_source {
        items.push(format!("dataEntity {d}"));
    }
    if !x.actions.is_empty() {
        let kinds: Vec<String> = x.actions.iter().map(|k| kind_surface(*k)).collect();
        items.push(format!("actions {}", kinds.join(", ")));
    }
    items.extend(x.operations.iter().map(operation));
    items.extend(x.tags.iter().map(tag));
    items.extend(x.description.as_deref().map(description));
    block(head, items, "  ")
}

fn operation(op: &OlapOperation) -> String {
    if let OperationBody::Underspecified { dimensions } = &op.body {
        if op.name == op.id && op.description.is_none() {
            return tag(&Tag {
                name: format!("{BI_ACTION_TAG}:{}:{}", kind_surface(op.kind), op.id),
                value: format!("Dimensions:'{}'", dimensions.join(", ")),
            });
        }
    }
    let mut items = Vec::new();
    match &op.body {
        OperationBody::Filter { predicates } => {
            let preds: Vec<String> = predicates.iter().map(|p| p.to_string()).collect();
            items.push(format!("where {}", preds.join(" and ")));
        }
        OperationBody::GroupBy { path } => items.push(format!("groupBy {path}")),
        OperationBody::Swap { first, second } => items.push(format!("swap {first} with {second}")),
        OperationBody::Underspecified { dimensions } if dimensions.is_empty() => {}
        OperationBody::Underspecified { dimensions } => items.push(format!("dimensions {}", dimensions.join(", "))),
    }
    items.extend(op.description.as_deref().map(description));
    let body = if items.is_empty() { " []".to_string() } else { inline_items(&items) };
    format!("operation {} : {}{body}", maybe_named(&op.id, &op.name), kind_surface(op.kind))
}

fn container(x: &UiContainer) -> String {
    let mut head = format!("UIContainer {} : {}", named(&x.id, &x.name), x.container_type.as_str());
    if let Some(st) = &x.sub_type {
        head.push_str(" : ");
        head.push_str(st);
    }
    let mut items: Vec<String> = x.components.iter().map(component).collect();
    items.extend(x.events.iter().map(event));
    block(head, items, "  ")
}

fn component(x: &UiComponent) -> String {
    let mut head = format!("component {} : {}", named(&x.id, &x.name), x.component_type);
    if let Some(st) = &x.sub_type {
        head.push_str(" : ");
        head.push_str(st);
    }
    let mut items = Vec::new();
    if let Some(b) = &x.data_binding {
        items.push(format!("dataBinding {b}"));
    }
    for p in &x.parts {
        items.push(format!("part {} : Field : {} [dataAttributeBinding {}]", named(&p.id, &p.name), p.kind, p.binding));
    }
    items.extend(x.actions.iter().map(chart_action));
    items.extend(x.events.iter().map(event));
    if let Some(n) = &x.navigates_to {
        items.push(format!("navigationFlowTo {n}"));
    }
    items.extend(x.tags.iter().map(tag));
    items.extend(x.description.as_deref().map(description));
    block(head, items, "    ")
}

fn event_types(types: &[String]) -> String {
    types.iter().map(|t| format!(" : {t}")).collect()
}

fn chart_action(a: &ChartAction) -> String {
    let mut items = Vec::new();
    if let Some(f) = &a.flow_to {
        items.push(format!("navigationFlowTo {f}"));
    }
    format!("event {}{}{}", a.kind, event_types(&a.event_type), inline_items(&items))
}

fn event(e: &UiEvent) -> String {
    // A plain event named like a chart action would read back as one; writing
    // its display name keeps the two apart.
    let id = if e.id != e.name || vocab::chart_action(&e.id).is_some() { named(&e.id, &e.name) } else { e.id.clone() };
    let mut items = Vec::new();
    if let Some(f) = &e.flow_to {
        items.push(format!("navigationFlowTo {f}"));
    }
    items.extend(e.tags.iter().map(tag));
    format!("event {id}{}{}", event_types(&e.event_type), inline_items(&items))
}
