use super::Sink;
use crate::diag::Diagnostic;
use crate::model::{key, vocab, AttributeType, SourceMap, SpecificationModel, VocabCategory};

/// Every vocabulary term is a built-in or a declared extension, and no
/// extension redefines a built-in (SEM050).
pub fn check_vocabulary(model: &SpecificationModel, spans: &SourceMap) -> Vec<Diagnostic> {
    let mut s = Sink::new(spans);
    let term = |s: &mut Sink<'_>, cat: VocabCategory, t: &str, keys: &[String]| {
        if !model.knows_term(cat, t) {
            s.error("SEM050", format!("`{t}` is not a known {cat}"), keys);
        }
    };
    for x in &model.vocabulary_extensions {
        if vocab::is_builtin(x.category, &x.id) {
            s.error(
                "SEM050",
                format!("extension `{}` redefines a built-in {}", x.id, x.category),
                &[key::extension(x.category.as_str(), &x.id)],
            );
        }
    }
    for e in &model.entities {
        if let Some(sub) = &e.sub_type {
            term(&mut s, VocabCategory::DataEntitySubType, sub, &[key::entity(&e.id)]);
        }
        for a in &e.attributes {
            if let AttributeType::Extension { name } = &a.attr_type {
                term(
                    &mut s,
                    VocabCategory::DataAttributeType,
                    name,
                    &[key::attribute_type(&e.id, &a.id), key::attribute(&e.id, &a.id)],
                );
            }
        }
    }
    for u in &model.use_cases {
        term(&mut s, VocabCategory::UseCaseType, &u.uc_type, &[key::use_case_type(&u.id), key::use_case(&u.id)]);
    }
    for c in &model.ui_containers {
        if let Some(sub) = &c.sub_type {
            term(&mut s, VocabCategory::UIContainerSubType, sub, &[key::container(&c.id)]);
        }
        for comp in &c.components {
            let at = [key::component_type(&c.id, &comp.id), key::component(&c.id, &comp.id)];
            // An empty type marks an unresolved reference, reported by the parser.
            if !comp.component_type.is_empty() {
                term(&mut s, VocabCategory::UIComponentType, &comp.component_type, &at);
            }
            if let Some(sub) = &comp.sub_type {
                term(&mut s, VocabCategory::UIComponentSubType, sub, &at);
            }
            for (i, p) in comp.parts.iter().enumerate() {
                term(&mut s, VocabCategory::UIComponentPartSubType, &p.kind, &[key::part(&c.id, &comp.id, i)]);
            }
        }
    }
    s.finish()
}
