use std::collections::{HashMap, HashSet};

use super::Sink;
use crate::diag::Diagnostic;
use crate::model::{key, AttributeType, Constraint, SourceMap, SpecificationModel};

/// Duplicate identifiers (SEM004 top level and per container or use case,
/// SEM005 within an entity, enumeration or component) and references to
/// unknown enumerations, entities and actors (SEM006).
pub fn check_ids(model: &SpecificationModel, spans: &SourceMap) -> Vec<Diagnostic> {
    let mut s = Sink::new(spans);
    duplicates(&mut s, "SEM004", "enumeration", model.enumerations.iter().map(|e| e.id.as_str()), key::enumeration);
    duplicates(&mut s, "SEM004", "entity", model.entities.iter().map(|e| e.id.as_str()), key::entity);
    duplicates(&mut s, "SEM004", "cluster", model.clusters.iter().map(|c| c.id.as_str()), key::cluster);
    duplicates(&mut s, "SEM004", "actor", model.actors.iter().map(|a| a.id.as_str()), key::actor);
    duplicates(&mut s, "SEM004", "use case", model.use_cases.iter().map(|u| u.id.as_str()), key::use_case);
    duplicates(&mut s, "SEM004", "container", model.ui_containers.iter().map(|c| c.id.as_str()), key::container);
    for c in &model.clusters {
        if model.entity(&c.id).is_some() {
            s.error("SEM004", format!("cluster `{}` has the same id as an entity", c.id), &[key::cluster(&c.id)]);
        }
    }
    let mut seen_ext = HashMap::new();
    for x in &model.vocabulary_extensions {
        let n = seen_ext.entry((x.category, x.id.as_str())).or_insert(0usize);
        if *n > 0 {
            let span = spans.nth(&key::extension(x.category.as_str(), &x.id), *n);
            s.error_at("SEM004", format!("{} `{}` is declared more than once", x.category, x.id), span);
        }
        *n += 1;
    }

    for e in &model.enumerations {
        duplicates(&mut s, "SEM005", &format!("value of enumeration {}", e.id), e.values.iter().map(String::as_str), |v| {
            key::enum_value(&e.id, v)
        });
    }
    for e in &model.entities {
        duplicates(&mut s, "SEM005", &format!("attribute of {}", e.id), e.attributes.iter().map(|a| a.id.as_str()), |a| {
            key::attribute(&e.id, a)
        });
        for a in &e.attributes {
            let at = [key::attribute_type(&e.id, &a.id), key::attribute(&e.id, &a.id)];
            match &a.attr_type {
                AttributeType::EnumerationRef { enumeration } if model.enumeration(enumeration).is_none() => {
                    s.error("SEM006", format!("`{}.{}` uses unknown enumeration `{enumeration}`", e.id, a.id), &at)
                }
                AttributeType::DimensionRef { entity } if model.entity(entity).is_none() => {
                    s.error("SEM006", format!("`{}.{}` refers to unknown entity `{entity}`", e.id, a.id), &at)
                }
                _ => {}
            }
            for c in &a.constraints {
                if let Constraint::ForeignKey(target) = c {
                    if model.entity(target).is_none() {
                        s.error(
                            "SEM006",
                            format!("foreign key of `{}.{}` names unknown entity `{target}`", e.id, a.id),
                            &[key::attribute(&e.id, &a.id)],
                        );
                    }
                }
            }
        }
    }
    for c in &model.clusters {
        for m in c.members() {
            if model.entity(m).is_none() {
                s.error(
                    "SEM006",
                    format!("cluster `{}` uses unknown entity `{m}`", c.id),
                    &[key::cluster_member(&c.id, m), key::cluster(&c.id)],
                );
            }
        }
    }
    actor_hierarchy(&mut s, model);

    for u in &model.use_cases {
        duplicates(&mut s, "SEM004", &format!("operation of {}", u.id), u.operations.iter().map(|o| o.id.as_str()), |o| {
            key::operation(&u.id, o)
        });
    }
    for c in &model.ui_containers {
        duplicates(&mut s, "SEM004", &format!("component of {}", c.id), c.components.iter().map(|x| x.id.as_str()), |x| {
            key::component(&c.id, x)
        });
        for comp in &c.components {
            let mut seen = HashSet::new();
            for (i, p) in comp.parts.iter().enumerate() {
                if !seen.insert(p.id.as_str()) {
                    s.error(
                        "SEM005",
                        format!("part `{}` appears more than once in `{}`", p.id, comp.id),
                        &[key::part(&c.id, &comp.id, i)],
                    );
                }
            }
        }
    }
    s.finish()
}

fn duplicates<'a>(
    s: &mut Sink<'_>,
    code: &str,
    what: &str,
    ids: impl Iterator<Item = &'a str>,
    key_of: impl Fn(&str) -> String,
) {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for id in ids {
        let n = seen.entry(id).or_insert(0);
        if *n > 0 {
            let k = key_of(id);
            let span = s.spans.nth(&k, *n).or_else(|| s.spans.get(&k));
            s.error_at(code, format!("{what} `{id}` is declared more than once"), span);
        }
        *n += 1;
    }
}

fn actor_hierarchy(s: &mut Sink<'_>, model: &SpecificationModel) {
    for a in &model.actors {
        let Some(parent) = &a.is_a else { continue };
        let at = [key::actor_is_a(&a.id), key::actor(&a.id)];
        if model.actor(parent).is_none() {
            s.error("SEM006", format!("actor `{}` specializes unknown actor `{parent}`", a.id), &at);
            continue;
        }
        let mut seen = HashSet::from([a.id.as_str()]);
        let mut cur = parent.as_str();
        loop {
            if !seen.insert(cur) {
                if cur == a.id {
                    s.error("SEM006", format!("actor `{}` is part of an isA cycle", a.id), &at);
                }
                break;
            }
            match model.actor(cur).and_then(|x| x.is_a.as_deref()) {
                Some(next) => cur = next,
                None => break,
            }
        }
    }
}
