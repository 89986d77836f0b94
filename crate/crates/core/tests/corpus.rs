use std::path::PathBuf;

use cnlbi_core::diag::{has_errors, Diagnostic};
use cnlbi_core::model::{canonicalize, SpecificationModel};
use cnlbi_core::syntax::{emit_asl, emit_cnlbi, parse_asl, parse_cnlbi, Parsed};

fn corpus(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn errors(p: &Parsed) -> Vec<&Diagnostic> {
    p.diagnostics.iter().filter(|d| d.is_error()).collect()
}

fn shared_subset(m: &SpecificationModel) -> SpecificationModel {
    SpecificationModel {
        enumerations: m.enumerations.clone(),
        entities: m.entities.clone(),
        actors: m.actors.clone(),
        ..SpecificationModel::default()
    }
}

#[test]
fn cnlbi_corpus_parses_without_errors() {
    let p = parse_cnlbi(&corpus("medbuddy.cnlbi"));
    assert!(!has_errors(&p.diagnostics), "{:#?}", errors(&p));
    assert_eq!(p.model.entities.len(), 6);
    assert_eq!(p.model.use_cases.len(), 4);
    assert_eq!(p.model.ui_containers.len(), 2);
}

#[test]
fn asl_corpus_parses_without_errors() {
    let p = parse_asl(&corpus("medbuddy.asl"));
    assert!(!has_errors(&p.diagnostics), "{:#?}", errors(&p));
    assert!(p.diagnostics.is_empty(), "{:#?}", p.diagnostics);
    assert_eq!(p.model.entities.len(), 6);
    assert_eq!(p.model.use_cases.len(), 4);
    assert_eq!(p.model.ui_containers.len(), 2);
    assert_eq!(p.model.ui_containers[0].components.len(), 5);
}

#[test]
fn both_renderings_agree_on_entities_enumerations_and_actors() {
    let cnl = parse_cnlbi(&corpus("medbuddy.cnlbi")).model;
    let asl = parse_asl(&corpus("medbuddy.asl")).model;
    let a = String::from_utf8(canonicalize(&shared_subset(&cnl))).unwrap();
    let b = String::from_utf8(canonicalize(&shared_subset(&asl))).unwrap();
    if a != b {
        for (x, y) in a.lines().zip(b.lines()) {
            if x != y {
                panic!("first difference:\ncnlbi: {x}\nasl:   {y}");
            }
        }
        panic!("canonical forms differ in length");
    }
}

fn assert_same(a: &SpecificationModel, b: &SpecificationModel) {
    let a = String::from_utf8(canonicalize(a)).unwrap();
    let b = String::from_utf8(canonicalize(b)).unwrap();
    for (x, y) in a.lines().zip(b.lines()) {
        assert_eq!(x, y);
    }
    assert_eq!(a, b);
}

#[test]
fn cnlbi_corpus_round_trips_through_both_styles() {
    let direct = parse_cnlbi(&corpus("medbuddy.cnlbi")).model;

    let (text, _) = emit_cnlbi(&direct);
    let again = parse_cnlbi(&text);
    assert!(again.diagnostics.is_empty(), "{:#?}\n{text}", again.diagnostics);
    assert_same(&again.model, &direct);
    assert_eq!(emit_cnlbi(&again.model).0, text);

    let asl = emit_asl(&direct);
    let via_asl = parse_asl(&asl);
    assert!(via_asl.diagnostics.is_empty(), "{:#?}\n{asl}", via_asl.diagnostics);
    assert_same(&via_asl.model, &direct);
}

#[test]
fn asl_corpus_round_trips() {
    let direct = parse_asl(&corpus("medbuddy.asl")).model;
    let text = emit_asl(&direct);
    let again = parse_asl(&text);
    assert!(again.diagnostics.is_empty(), "{:#?}\n{text}", again.diagnostics);
    assert_same(&again.model, &direct);
    assert_eq!(emit_asl(&again.model), text);
}

#[test]
fn asl_to_cnlbi_keeps_what_cnlbi_can_say() {
    let direct = parse_asl(&corpus("medbuddy.asl")).model;
    let (text, warnings) = emit_cnlbi(&direct);
    assert!(!warnings.is_empty(), "tags and events have no CNL-BI spelling");
    let back = parse_cnlbi(&text);
    assert!(!has_errors(&back.diagnostics), "{:#?}\n{text}", back.diagnostics);
    assert_same(&shared_subset(&back.model), &shared_subset(&direct));
}

fn institution_fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/institution").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Only the entities, with attribute display names defaulted to their ids.
fn entities_with_default_names(m: &SpecificationModel) -> SpecificationModel {
    let mut entities = m.entities.clone();
    for a in entities.iter_mut().flat_map(|e| e.attributes.iter_mut()) {
        a.name = a.id.clone();
    }
    SpecificationModel { entities, ..SpecificationModel::default() }
}

#[test]
fn institution_listings_describe_the_same_entity() {
    let cnl = parse_cnlbi(&institution_fixture("spec4.cnlbi"));
    assert!(!has_errors(&cnl.diagnostics), "{:#?}", errors(&cnl));
    let e = &cnl.model.entities[0];
    assert_eq!((e.id.as_str(), e.attributes.len()), ("Institution", 7));
    assert!(e.is_dimension());
    assert_eq!(e.description.as_deref(), Some("this dimension represents the details of an institution"));

    let asl = parse_asl(&institution_fixture("spec5.asl"));
    assert!(!has_errors(&asl.diagnostics), "{:#?}", errors(&asl));
    assert_eq!(asl.model.entities[0].attributes[1].name, "Code");
    assert_same(&entities_with_default_names(&asl.model), &entities_with_default_names(&cnl.model));
}
