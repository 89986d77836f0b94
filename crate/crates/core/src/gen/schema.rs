use std::collections::{BTreeMap, BTreeSet};

use crate::diag::Diagnostic;
use crate::model::{primary_key, sorted, AttributeType, Constraint, DataAttribute, DataEntity, PrimitiveType, SpecificationModel};
use crate::sema::schema_shape;
use crate::syntax::expr::format_expr;

use super::{ident, string_literal};

pub const SCHEMA_HEADER: &str = "-- Relational schema generated from the specification model.\n";

/// One `CREATE TABLE` per entity, referenced tables first.
pub fn gen_schema_sql(model: &SpecificationModel) -> Result<String, Diagnostic> {
    let model = sorted(model);
    let mut out = String::from(SCHEMA_HEADER);
    if model.entities.is_empty() {
        return Ok(out);
    }
    out.push_str(&format!("-- Shape: {} schema; measures are computed at query time and not stored.\n", schema_shape(&model)));
    for e in table_order(&model)? {
        out.push('\n');
        create_table(&model, e, &mut out);
    }
    Ok(out)
}

/// Entities ordered so that every referenced entity precedes its referrers.
/// Among entities that are ready at the same time dimensions come before
/// facts, then ids sort alphabetically.
pub fn table_order(model: &SpecificationModel) -> Result<Vec<&DataEntity>, Diagnostic> {
    let mut pending: BTreeMap<&str, BTreeSet<&str>> = model
        .entities
        .iter()
        .map(|e| {
            let deps = references(e)
                .into_iter()
                .filter(|(_, t)| *t != e.id && model.entity(t).is_some())
                .map(|(_, t)| t)
                .collect();
            (e.id.as_str(), deps)
        })
        .collect();
    let mut order = Vec::new();
    while !pending.is_empty() {
        let next = pending
            .iter()
            .filter(|(_, deps)| deps.is_empty())
            .map(|(id, _)| model.entity(id).expect("pending ids are entities"))
            .min_by(|a, b| (a.is_fact(), &a.id).cmp(&(b.is_fact(), &b.id)));
        let Some(next) = next else {
            let cycle: Vec<&str> = pending.keys().copied().collect();
            return Err(Diagnostic::error(
                "GEN001",
                format!("entities reference each other in a cycle: {}", cycle.join(", ")),
                None,
            ));
        };
        pending.remove(next.id.as_str());
        for deps in pending.values_mut() {
            deps.remove(next.id.as_str());
        }
        order.push(next);
    }
    Ok(order)
}

/// `(attribute, referenced entity)` for dimension references and explicit
/// foreign keys, without repeats.
fn references(e: &DataEntity) -> Vec<(&str, &str)> {
    let mut out: Vec<(&str, &str)> = Vec::new();
    for a in e.stored_attributes() {
        let implied = match &a.attr_type {
            AttributeType::DimensionRef { entity } => Some(entity.as_str()),
            _ => None,
        };
        let explicit = a.constraints.iter().filter_map(|c| match c {
            Constraint::ForeignKey(t) => Some(t.as_str()),
            _ => None,
        });
        for t in implied.into_iter().chain(explicit) {
            if !out.contains(&(a.id.as_str(), t)) {
                out.push((a.id.as_str(), t));
            }
        }
    }
    out
}

pub fn sql_type(model: &SpecificationModel, a: &DataAttribute) -> String {
    match &a.attr_type {
        AttributeType::Primitive { name, length } => primitive_type(*name, *length),
        AttributeType::EnumerationRef { .. } | AttributeType::Extension { .. } => "VARCHAR(255)".into(),
        AttributeType::DimensionRef { entity } => match model.entity(entity).and_then(primary_key).map(|k| &k.attr_type) {
            Some(AttributeType::Primitive { name, length }) => primitive_type(*name, *length),
            _ => "VARCHAR(255)".into(),
        },
    }
}

fn primitive_type(ty: PrimitiveType, length: Option<u32>) -> String {
    match ty {
        PrimitiveType::Uuid => "CHAR(36)".into(),
        PrimitiveType::Integer => "INTEGER".into(),
        PrimitiveType::Decimal => "DECIMAL(18,6)".into(),
        PrimitiveType::String => format!("VARCHAR({})", length.unwrap_or(255)),
        PrimitiveType::Boolean => "BOOLEAN".into(),
        PrimitiveType::Date => "DATE".into(),
        PrimitiveType::Time => "TIME".into(),
        PrimitiveType::DateTime => "TIMESTAMP".into(),
    }
}

fn create_table(model: &SpecificationModel, e: &DataEntity, out: &mut String) {
    let mut lines = Vec::new();
    for a in e.stored_attributes() {
        let mut line = format!("{} {}", ident(&a.id), sql_type(model, a));
        if a.is_not_null() || a.is_primary_key() {
            line.push_str(" NOT NULL");
        }
        if a.constraints.contains(&Constraint::Unique) && !a.is_primary_key() {
            line.push_str(" UNIQUE");
        }
        if let AttributeType::EnumerationRef { enumeration } = &a.attr_type {
            if let Some(en) = model.enumeration(enumeration) {
                let values: Vec<String> = en.values.iter().map(|v| string_literal(v)).collect();
                line.push_str(&format!(" CHECK ({} IN ({}))", ident(&a.id), values.join(", ")));
            }
        }
        lines.push(line);
    }
    let keys: Vec<String> = e.stored_attributes().filter(|a| a.is_primary_key()).map(|a| ident(&a.id)).collect();
    if !keys.is_empty() {
        lines.push(format!("PRIMARY KEY ({})", keys.join(", ")));
    }
    for (attr, target) in references(e) {
        let Some(pk) = model.entity(target).and_then(primary_key) else { continue };
        lines.push(format!("FOREIGN KEY ({}) REFERENCES {} ({})", ident(attr), ident(target), ident(&pk.id)));
    }
    out.push_str(&format!("CREATE TABLE {} (\n", ident(&e.id)));
    out.push_str(&lines.iter().map(|l| format!("    {l}")).collect::<Vec<_>>().join(",\n"));
    out.push_str("\n);\n");
    let measures: Vec<&DataAttribute> = e.measures().collect();
    if !measures.is_empty() {
        out.push_str(&format!("-- Measures of {} (not stored):\n", ident(&e.id)));
        for m in measures {
            let expr = m.measure.as_ref().map(format_expr).unwrap_or_default();
            out.push_str(&format!("--   {} = {expr}\n", m.id));
        }
    }
}
