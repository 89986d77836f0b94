use std::fmt::Write;

use crate::model::{sorted, AttributeType, Constraint, DataAttribute, OlapOperation, Operand, OperationBody, Predicate, SpecificationModel};
use crate::syntax::expr::format_expr;

/// Markdown overview of a model for stakeholders. Sections without content
/// are left out.
pub fn gen_requirements_doc(model: &SpecificationModel) -> String {
    let model = sorted(model);
    let mut out = String::from("# Requirements\n");
    if !model.entities.is_empty() || !model.enumerations.is_empty() {
        data_model(&model, &mut out);
    }
    if model.entities.iter().any(|e| e.measures().next().is_some()) {
        measures(&model, &mut out);
    }
    if !model.actors.is_empty() || !model.use_cases.is_empty() {
        actors_and_use_cases(&model, &mut out);
    }
    if !model.ui_containers.is_empty() {
        ui(&model, &mut out);
    }
    out
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

fn type_name(a: &DataAttribute) -> String {
    match &a.attr_type {
        AttributeType::Primitive { name, length: Some(n) } => format!("{name}({n})"),
        AttributeType::Primitive { name, length: None } => name.to_string(),
        AttributeType::EnumerationRef { enumeration } => enumeration.clone(),
        AttributeType::DimensionRef { entity } => format!("reference to {entity}"),
        AttributeType::Extension { name } => name.clone(),
    }
}

fn constraints(a: &DataAttribute) -> String {
    a.constraints
        .iter()
        .map(|c| match c {
            Constraint::PrimaryKey => "primary key".to_string(),
            Constraint::NotNull => "required".to_string(),
            Constraint::Unique => "unique".to_string(),
            Constraint::ForeignKey(t) => format!("foreign key to {t}"),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn data_model(model: &SpecificationModel, out: &mut String) {
    out.push_str("\n## Data Model\n");
    if !model.enumerations.is_empty() {
        out.push_str("\n| Enumeration | Values |\n|---|---|\n");
        for en in &model.enumerations {
            let _ = writeln!(out, "| {} | {} |", cell(&en.id), cell(&en.values.join(", ")));
        }
    }
    if model.entities.is_empty() {
        return;
    }
    out.push_str("\n| Entity | Description |\n|---|---|\n");
    for e in &model.entities {
        let kind = match &e.sub_type {
            Some(sub) => format!("{} / {sub}", e.entity_type),
            None => e.entity_type.to_string(),
        };
        let _ = writeln!(out, "| {} — {kind} | {} |", cell(&e.id), cell(e.description.as_deref().unwrap_or("")));
    }
    for e in &model.entities {
        let _ = writeln!(out, "\n### {}\n", e.id);
        out.push_str("| Attribute | Type | Constraints |\n|---|---|---|\n");
        for a in e.stored_attributes() {
            let _ = writeln!(out, "| {} | {} | {} |", cell(&a.id), cell(&type_name(a)), constraints(a));
        }
    }
}

fn measures(model: &SpecificationModel, out: &mut String) {
    out.push_str("\n## Measures\n\n| Entity | Measure | Type | Definition |\n|---|---|---|---|\n");
    for e in &model.entities {
        for m in e.measures() {
            let expr = m.measure.as_ref().map(format_expr).unwrap_or_default();
            let _ = writeln!(out, "| {} | {} | {} | `{}` |", cell(&e.id), cell(&m.id), cell(&type_name(m)), cell(&expr));
        }
    }
}

fn actors_and_use_cases(model: &SpecificationModel, out: &mut String) {
    out.push_str("\n## Actors & Use Cases\n");
    if !model.actors.is_empty() {
        out.push_str("\n| Actor | Type | Description |\n|---|---|---|\n");
        for a in &model.actors {
            let kind = match &a.is_a {
                Some(parent) => format!("{} (is a {parent})", a.actor_type.as_str()),
                None => a.actor_type.as_str().to_string(),
            };
            let _ = writeln!(out, "| {} | {kind} | {} |", cell(&a.id), cell(a.description.as_deref().unwrap_or("")));
        }
    }
    for uc in &model.use_cases {
        let _ = writeln!(out, "\n### {} ({})\n", uc.id, uc.uc_type);
        if let Some(actor) = &uc.primary_actor {
            let _ = writeln!(out, "- Actor: {actor}");
        }
        if !uc.supporting_actors.is_empty() {
            let _ = writeln!(out, "- Supporting actors: {}", uc.supporting_actors.join(", "));
        }
        if let Some(source) = &uc.data_source {
            let _ = writeln!(out, "- Data source: {source}");
        }
        if let Some(d) = &uc.description {
            let _ = writeln!(out, "- Description: {}", d.replace('\n', " "));
        }
        for op in &uc.operations {
            let _ = writeln!(out, "- {} ({}): {}", op.id, op.kind, restate(model, op));
        }
    }
}

/// The operation's clause in plain words.
fn restate(model: &SpecificationModel, op: &OlapOperation) -> String {
    match &op.body {
        OperationBody::Filter { predicates } => {
            let conds: Vec<String> = predicates.iter().map(|p| condition(model, p)).collect();
            format!("keeps only the records where {}.", conds.join(" and "))
        }
        OperationBody::GroupBy { path } => format!("groups the records by {path}."),
        OperationBody::Swap { first, second } => format!("swaps the {first} and {second} axes of the result."),
        OperationBody::Underspecified { dimensions } => {
            format!("touches {}; no condition or grouping is stated.", dimensions.join(", "))
        }
    }
}

fn condition(model: &SpecificationModel, p: &Predicate) -> String {
    match &p.right {
        Operand::Path(path) if path.len() == 2 && model.enumeration(path.first()).is_some() => {
            format!("{} is {}", p.left, path.last())
        }
        Operand::Path(path) => format!("{} equals a chosen {path} (parameter `:{}`)", p.left, path.last()),
        Operand::Literal(lit) => format!("{} equals {lit}", p.left),
    }
}

fn ui(model: &SpecificationModel, out: &mut String) {
    out.push_str("\n## UI\n");
    for c in &model.ui_containers {
        let _ = writeln!(out, "\n### {} ({})\n", c.id, c.container_type.as_str());
        out.push_str("| Component | Type | Data | Parts |\n|---|---|---|---|\n");
        for comp in &c.components {
            let kind = match &comp.sub_type {
                Some(sub) => format!("{} / {sub}", comp.component_type),
                None => comp.component_type.clone(),
            };
            let mut parts: Vec<String> = comp.parts.iter().map(|p| format!("{}: {}", p.kind, p.binding)).collect();
            if let Some(to) = &comp.navigates_to {
                parts.push(format!("navigates to {to}"));
            }
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                cell(&comp.id),
                cell(&kind),
                cell(comp.data_binding.as_deref().unwrap_or("")),
                cell(&parts.join("; "))
            );
        }
    }
}
