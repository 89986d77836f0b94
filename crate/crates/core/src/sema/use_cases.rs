use std::collections::BTreeSet;

use super::measures::{compare, enum_literal};
use super::{Sink, Ty};
use crate::diag::Diagnostic;
use crate::model::{
    access_path, key, primary_key, reachable_entities, resolve, vocab, AttributePath, DataAttribute, DataEntity, OlapKind,
    OlapOperation, Operand, OperationBody, SourceMap, SpecificationModel, UseCase,
};

/// Words that mark a use case description as restricting what its actor
/// may see.
pub const RESTRICTION_WORDS: &[&str] = &["only", "single", "solely", "restricted", "restrict", "restricts", "limited", "own"];

pub fn check_use_cases(model: &SpecificationModel, spans: &SourceMap) -> Vec<Diagnostic> {
    let mut s = Sink::new(spans);
    for u in &model.use_cases {
        for actor in u.primary_actor.iter().chain(&u.supporting_actors) {
            if model.actor(actor).is_none() {
                s.error(
                    "SEM020",
                    format!("use case `{}` names unknown actor `{actor}`", u.id),
                    &[key::use_case_actor(&u.id, actor), key::use_case(&u.id)],
                );
            }
        }
        let bi = u.uc_type == vocab::BI_ANALYSIS;
        let source = data_source(model, u, bi, &mut s);
        if bi && u.operations.is_empty() {
            s.error("SEM023", format!("analysis use case `{}` performs no operation", u.id), &[key::use_case(&u.id)]);
        }
        for op in &u.operations {
            check_operation(model, u, op, source, &mut s);
        }
        if source.is_some() {
            restriction_in_prose(model, u, &mut s);
        }
    }
    s.finish()
}

/// The valid data source of `u`, reporting SEM021 otherwise.
fn data_source<'m>(model: &SpecificationModel, u: &'m UseCase, bi: bool, s: &mut Sink<'_>) -> Option<&'m str> {
    let at = [key::data_source(&u.id), key::use_case(&u.id)];
    let Some(ds) = u.data_source.as_deref() else {
        if bi {
            s.error("SEM021", format!("analysis use case `{}` has no data source", u.id), &at);
        }
        return None;
    };
    if model.cluster(ds).is_some() {
        return Some(ds);
    }
    match model.entity(ds) {
        Some(e) if e.is_fact() || !bi => Some(ds),
        Some(_) => {
            s.error("SEM021", format!("data source `{ds}` of `{}` is neither a Fact nor a cluster", u.id), &at);
            None
        }
        None => {
            s.error("SEM021", format!("data source `{ds}` of `{}` is not an entity or cluster", u.id), &at);
            None
        }
    }
}

fn check_operation(model: &SpecificationModel, u: &UseCase, op: &OlapOperation, source: Option<&str>, s: &mut Sink<'_>) {
    let at_op = key::operation(&u.id, &op.id);
    match &op.body {
        OperationBody::Filter { predicates } => {
            let arity_ok = match op.kind {
                OlapKind::Slice => predicates.len() == 1,
                _ => predicates.len() >= 2,
            };
            if !arity_ok {
                let need = if op.kind == OlapKind::Slice { "exactly one condition" } else { "at least two conditions" };
                s.error(
                    "SEM023",
                    format!("{} `{}` needs {need}, found {}", op.kind, op.id, predicates.len()),
                    std::slice::from_ref(&at_op),
                );
            }
            let Some(ds) = source else { return };
            for (i, p) in predicates.iter().enumerate() {
                let at = [key::predicate(&u.id, &op.id, i), at_op.clone()];
                let left = match resolve(model, &p.left, ds) {
                    Ok(t) => attribute(model, &t.entity, &t.attribute),
                    Err(err) => {
                        s.error("SEM022", format!("`{}` does not resolve from `{ds}`: {err}", p.left), &at);
                        continue;
                    }
                };
                let result = match &p.right {
                    Operand::Path(path) if enum_literal(model, path).is_none() => {
                        match predicate_parameter(model, path) {
                            Ok(param) => compare_parameter(model, left, path, param),
                            Err(msg) => {
                                let at_right = [key::predicate_right(&u.id, &op.id, i), at[0].clone()];
                                s.error("SEM022", msg, &at_right);
                                continue;
                            }
                        }
                    }
                    right => compare(model, left, right),
                };
                if let Err(msg) = result {
                    s.error("SEM013", format!("condition `{p}`: {msg}"), &at);
                }
            }
        }
        OperationBody::GroupBy { path } => {
            let Some(ds) = source else { return };
            if let Err(err) = resolve(model, path, ds) {
                s.error(
                    "SEM022",
                    format!("`{path}` does not resolve from `{ds}`: {err}"),
                    &[key::group_by(&u.id, &op.id), at_op],
                );
            }
        }
        OperationBody::Swap { first, second } => {
            let Some(ds) = source else { return };
            let at = [key::swap(&u.id, &op.id), at_op];
            if first == second {
                s.error("SEM024", format!("pivot `{}` swaps `{first}` with itself", op.id), &at);
            }
            for d in [first, second] {
                if !model.entity(d).is_some_and(DataEntity::is_dimension) {
                    s.error("SEM024", format!("pivot `{}` names `{d}`, which is not a dimension", op.id), &at);
                } else if let Err(e) = access_path(model, ds, d) {
                    s.error("SEM024", format!("pivot `{}` cannot place `{d}`: {e}", op.id), &at);
                }
            }
        }
        OperationBody::Underspecified { dimensions } => {
            s.warning(
                "SEM025",
                format!("{} `{}` names no condition, grouping or swap; it cannot be executed", op.kind, op.id),
                std::slice::from_ref(&at_op),
            );
            let Some(ds) = source else { return };
            let reachable = reachable_entities(model, ds);
            for d in dimensions {
                if !reachable.contains(d) {
                    s.error(
                        "SEM022",
                        format!("{} `{}` names `{d}`, which is not an entity reachable from `{ds}`", op.kind, op.id),
                        std::slice::from_ref(&at_op),
                    );
                }
            }
        }
    }
}

fn attribute<'m>(model: &'m SpecificationModel, entity: &str, attr: &str) -> &'m DataAttribute {
    model.entity(entity).and_then(|e| e.attribute(attr)).expect("resolved target exists")
}

/// The attribute a free parameter such as `Time.year` stands for. The path
/// must be `Entity.attribute`; reachability is not required.
pub fn predicate_parameter<'m>(model: &'m SpecificationModel, path: &AttributePath) -> Result<&'m DataAttribute, String> {
    let [entity, attr] = path.segments() else {
        return Err(format!("parameter `{path}` must have the form Entity.attribute"));
    };
    let e = model.entity(entity).ok_or_else(|| format!("parameter `{path}` names unknown entity `{entity}`"))?;
    e.attribute(attr).ok_or_else(|| format!("parameter `{path}`: entity `{entity}` has no attribute `{attr}`"))
}

fn compare_parameter(
    model: &SpecificationModel,
    left: &DataAttribute,
    path: &AttributePath,
    param: &DataAttribute,
) -> Result<(), String> {
    let lt = Ty::of_attribute(left);
    let pt = Ty::of_attribute(param);
    if let Ty::Dim(x) = &lt {
        let Some(target) = model.entity(x).filter(|t| t.is_dimension()) else { return Ok(()) };
        return if path.first() == x && primary_key(target).is_some_and(|k| k.id == param.id) {
            Ok(())
        } else {
            Err(format!("a reference to `{x}` can only be compared with `{x}`'s primary key"))
        };
    }
    if lt.comparable(&pt) {
        Ok(())
    } else {
        Err(format!("cannot compare {lt} with {pt}"))
    }
}

/// SEM040: the description restricts the data the actor sees, but no
/// operation pins an entity the description mentions.
fn restriction_in_prose(model: &SpecificationModel, u: &UseCase, s: &mut Sink<'_>) {
    let Some(desc) = &u.description else { return };
    let words: BTreeSet<String> =
        desc.split(|c: char| !c.is_alphanumeric() && c != '_').map(str::to_lowercase).collect();
    if !RESTRICTION_WORDS.iter().any(|w| words.contains(*w)) {
        return;
    }
    let mentioned: BTreeSet<&str> = model
        .entities
        .iter()
        .filter(|e| words.contains(&e.id.to_lowercase()) || words.contains(&e.name.to_lowercase()))
        .map(|e| e.id.as_str())
        .collect();
    let pinned = pinned_entities(model, u);
    let restricted = if mentioned.is_empty() {
        !pinned.is_empty()
    } else {
        mentioned.iter().any(|e| pinned.contains(*e))
    };
    if !restricted {
        s.warning(
            "SEM040",
            format!(
                "use case `{}` describes a restriction that none of its operations enforces; it is documentation only",
                u.id
            ),
            &[key::use_case(&u.id)],
        );
    }
}

/// Entities whose identity some condition of `u` fixes: a condition on a
/// primary key or on a dimension reference, or a parameter that is a primary key.
fn pinned_entities(model: &SpecificationModel, u: &UseCase) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let Some(ds) = u.data_source.as_deref() else { return out };
    for p in u.operations.iter().flat_map(|o| o.predicates()) {
        if let Ok(t) = resolve(model, &p.left, ds) {
            let a = attribute(model, &t.entity, &t.attribute);
            if let Ty::Dim(x) = Ty::of_attribute(a) {
                out.insert(x);
            } else if a.is_primary_key() {
                out.insert(t.entity.clone());
            }
        }
        if let Operand::Path(path) = &p.right {
            if let Ok(param) = predicate_parameter(model, path) {
                if param.is_primary_key() {
                    out.insert(path.first().to_string());
                }
            }
        }
    }
    out
}
