use serde::Serialize;

use super::SpecificationModel;

pub const CANONICAL_HEADER: &str = "CNLBI-CANONICAL 1\n";

/// Copy of `model` with every top-level category ordered by id (extensions by
/// category, then id). Ties between duplicate ids are broken by content so
/// the result does not depend on declaration order. Nested lists keep their
/// declared order.
pub fn sorted(model: &SpecificationModel) -> SpecificationModel {
    let mut m = model.clone();
    sort_by_key(&mut m.enumerations, |e| e.id.clone());
    sort_by_key(&mut m.entities, |e| e.id.clone());
    sort_by_key(&mut m.clusters, |c| c.id.clone());
    sort_by_key(&mut m.actors, |a| a.id.clone());
    sort_by_key(&mut m.use_cases, |u| u.id.clone());
    sort_by_key(&mut m.ui_containers, |c| c.id.clone());
    sort_by_key(&mut m.vocabulary_extensions, |x| format!("{}\u{0}{}", x.category, x.id));
    m
}

fn sort_by_key<T: Serialize>(items: &mut [T], key: impl Fn(&T) -> String) {
    items.sort_by_cached_key(|item| (key(item), json(item)));
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("model values always serialize")
}

/// Deterministic byte form of the model used for equality.
///
/// A fixed header line, then for each non-empty category a `[category]`
/// line followed by one compact JSON line per element, elements sorted as in
/// [`sorted`]. Source locations are not part of the model and so never
/// appear here.
pub fn canonicalize(model: &SpecificationModel) -> Vec<u8> {
    let m = sorted(model);
    let mut out = String::from(CANONICAL_HEADER);
    section(&mut out, "enumerations", &m.enumerations);
    section(&mut out, "entities", &m.entities);
    section(&mut out, "clusters", &m.clusters);
    section(&mut out, "actors", &m.actors);
    section(&mut out, "useCases", &m.use_cases);
    section(&mut out, "uiContainers", &m.ui_containers);
    section(&mut out, "vocabularyExtensions", &m.vocabulary_extensions);
    out.into_bytes()
}

fn section<T: Serialize>(out: &mut String, name: &str, items: &[T]) {
    if items.is_empty() {
        return;
    }
    out.push('[');
    out.push_str(name);
    out.push_str("]\n");
    for item in items {
        out.push_str(&json(item));
        out.push('\n');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Actor, ActorType};

    fn actor(id: &str) -> Actor {
        Actor {
            id: id.into(),
            name: id.into(),
            actor_type: ActorType::User,
            stakeholder: None,
            is_a: None,
            description: None,
        }
    }

    #[test]
    fn empty_model_is_just_the_header() {
        assert_eq!(canonicalize(&SpecificationModel::default()), CANONICAL_HEADER.as_bytes());
    }

    #[test]
    fn declaration_order_does_not_matter() {
        let a = SpecificationModel { actors: vec![actor("B"), actor("A")], ..SpecificationModel::default() };
        let b = SpecificationModel { actors: vec![actor("A"), actor("B")], ..SpecificationModel::default() };
        assert_eq!(canonicalize(&a), canonicalize(&b));
        let text = String::from_utf8(canonicalize(&a)).unwrap();
        assert!(text.starts_with("CNLBI-CANONICAL 1\n[actors]\n{\"id\":\"A\""));
    }

    #[test]
    fn descriptions_are_significant() {
        let a = SpecificationModel { actors: vec![actor("A")], ..SpecificationModel::default() };
        let mut b = a.clone();
        b.actors[0].description = Some("x".into());
        assert_ne!(canonicalize(&a), canonicalize(&b));
    }
}
