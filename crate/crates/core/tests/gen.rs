mod support;

use std::collections::{BTreeMap, HashMap};

use cnlbi_core::gen::{gen_dashboard_manifest, gen_olap_sql, gen_requirements_doc, gen_schema_sql, generate, Artifact};
use cnlbi_core::model::SpecificationModel;
use cnlbi_core::olap::run_use_case;
use cnlbi_core::sema::check;
use cnlbi_core::syntax::{parse_asl, parse_cnlbi};
use rusqlite::types::Value as Sql;

const PIVOT: &str = "    OLAP Operation AppointmentsByInstitution is a Drill-down";

/// The corpus with an added Pivot operation.
fn with_pivot() -> SpecificationModel {
    let src = support::corpus("medbuddy.cnlbi").replacen(
        PIVOT,
        &format!("    OLAP Operation PatientAgainstInstitution is a Pivot swap Patient with Institution\n{PIVOT}"),
        1,
    );
    let p = parse_cnlbi(&src);
    assert!(p.diagnostics.iter().all(|d| !d.is_error()), "{:#?}", p.diagnostics);
    let report = check(&p.model, &p.spans);
    assert!(!report.has_errors(), "{:#?}", report.diagnostics);
    p.model
}

#[test]
fn schema_has_a_table_per_entity_dimensions_first() {
    let sql = gen_schema_sql(&support::medbuddy()).unwrap();
    let tables: Vec<&str> = sql
        .lines()
        .filter_map(|l| l.strip_prefix("CREATE TABLE \"")?.split('"').next())
        .collect();
    assert_eq!(tables, ["City", "Institution", "Patient", "RequestState", "Time", "AppointmentRequest"]);
    let fact = sql.split("CREATE TABLE \"AppointmentRequest\"").nth(1).unwrap();
    let fks: Vec<&str> = fact.lines().filter(|l| l.contains("FOREIGN KEY")).collect();
    assert_eq!(fks.len(), 5);
    for attr in ["institution", "patient", "state", "scheduled_date", "closed_date"] {
        assert!(fks.iter().any(|l| l.contains(&format!("(\"{attr}\")"))), "{attr}");
    }
    let city = sql.split("CREATE TABLE \"City\" (\n").nth(1).unwrap().split(");").next().unwrap();
    assert_eq!(city.lines().filter(|l| l.trim_start().starts_with('"')).count(), 4);
    assert!(city.contains("PRIMARY KEY (\"id\")"));
    assert!(sql.contains("\"gender\" VARCHAR(255) NOT NULL CHECK (\"gender\" IN ('Male', 'Female'))"));
    assert!(sql.contains("--   CancellationRate = CountCancelledAppointments / CountAppointments"));
    assert!(!sql.contains("\"CountAppointments\" "));
}

#[test]
fn reference_cycle_is_gen001() {
    let src = "DataEntity A is a Master Dimension with attributes\n\
               id is an Integer (PrimaryKey),\n\
               b refers to Dimension B.\n\
               DataEntity B is a Master Dimension with attributes\n\
               id is an Integer (PrimaryKey),\n\
               a refers to Dimension A.\n";
    let p = parse_cnlbi(src);
    assert!(p.diagnostics.iter().all(|d| !d.is_error()), "{:#?}", p.diagnostics);
    assert_eq!(gen_schema_sql(&p.model).unwrap_err().code, "GEN001");
}

#[test]
fn group_by_query_shape() {
    let m = support::medbuddy();
    let sql = gen_olap_sql(&m, "AnalysisAppointmentsInstitutionOnNationalLevel", "AppointmentsByInstitutionCity").unwrap();
    assert!(sql.contains("\"institution__city\".\"name\" AS \"Institution.city\""));
    assert!(sql.contains("COUNT(\"f\".\"id\") AS \"CountAppointments\""));
    assert!(sql.contains("GROUP BY \"institution__city\".\"name\""));
    let slice = gen_olap_sql(&m, "AnalysisAppointmentsInstitutionOnNationalLevel", "ScheduledAppointmentsInSpecificYear").unwrap();
    assert!(slice.contains("WHERE \"scheduled_date\".\"year\" = :year"));
}

#[test]
fn pivot_groups_by_both_dimensions() {
    let m = with_pivot();
    let sql = gen_olap_sql(&m, "AnalysisAppointmentsInstitutionOnNationalLevel", "PatientAgainstInstitution").unwrap();
    assert!(sql.contains("-- Pivot"));
    assert!(sql.contains("GROUP BY \"institution\".\"name\", \"patient\".\"name\""), "{sql}");
}

#[test]
fn pivot_over_an_ambiguous_dimension_is_rejected() {
    let src = support::corpus("medbuddy.cnlbi").replacen(
        PIVOT,
        &format!("    OLAP Operation TimeAgainstInstitution is a Pivot swap Time with Institution\n{PIVOT}"),
        1,
    );
    let p = parse_cnlbi(&src);
    let report = check(&p.model, &p.spans);
    let codes: Vec<&str> = report.errors().map(|d| d.code.as_str()).collect();
    assert_eq!(codes, ["SEM024"]);
}

#[test]
fn underspecified_operations_are_gen010() {
    let p = parse_asl(&support::corpus("medbuddy.asl"));
    let mut seen = 0;
    for uc in &p.model.use_cases {
        for op in uc.operations.iter().filter(|o| o.is_underspecified()) {
            seen += 1;
            assert_eq!(gen_olap_sql(&p.model, &uc.id, &op.id).unwrap_err().code, "GEN010");
        }
    }
    assert!(seen > 0);
    let (files, diags) = generate(&p.model, &[Artifact::Queries]);
    assert_eq!(diags.len(), seen);
    assert!(files.is_empty());
}

#[test]
fn unknown_operation_is_reported() {
    let m = support::medbuddy();
    assert_eq!(gen_olap_sql(&m, "Nope", "X").unwrap_err().code, "GEN011");
}

#[test]
fn dashboard_lists_containers_components_and_navigation() {
    let json: serde_json::Value = serde_json::from_str(&gen_dashboard_manifest(&support::medbuddy())).unwrap();
    let containers = json["containers"].as_array().unwrap();
    assert_eq!(containers.len(), 2);
    let inst = containers.iter().find(|c| c["id"] == "InstitutionOverviewPage").unwrap();
    let comps = inst["components"].as_array().unwrap();
    let ids: Vec<&str> = comps.iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["TimeRangeFilter", "LocationMap", "InstitutionTable", "CancellationRateChart", "NavigationButtons"]);
    let map = &comps[1];
    assert_eq!(map["chartSubtype"], "InteractiveGeographicalMap");
    assert_eq!(map["actions"].as_array().unwrap().len(), 3);
    let binding = |kind: &str| {
        let p = map["parts"].as_array().unwrap().iter().find(|p| p["kind"] == kind).unwrap();
        (p["entity"].as_str().unwrap().to_string(), p["attribute"].as_str().unwrap().to_string())
    };
    assert_eq!(binding("Latitude"), ("Institution".into(), "latitude".into()));
    assert_eq!(binding("Longitude"), ("Institution".into(), "longitude".into()));
    assert_eq!(binding("Value"), ("AppointmentRequest".into(), "CountAppointments".into()));
    let nav = inst["navigation"].as_array().unwrap();
    assert!(nav.iter().any(|e| e["from"] == "NavigationButtons" && e["to"] == "PatientOverviewPage"));
}

#[test]
fn requirements_doc_sections() {
    let doc = gen_requirements_doc(&support::medbuddy());
    assert!(doc.contains("| AppointmentRequest — Transaction / Fact |"));
    for section in ["## Data Model", "## Measures", "## Actors & Use Cases", "## UI"] {
        assert!(doc.contains(section), "{section}");
    }
    let only_actors = parse_cnlbi("Actor Analyst is a User described as someone who reads reports.\n").model;
    let doc = gen_requirements_doc(&only_actors);
    assert!(doc.contains("## Actors & Use Cases"));
    assert!(!doc.contains("## Data Model") && !doc.contains("## UI") && !doc.contains("## Measures"));
}

/// Every generated query, run in SQLite over the fixture, returns the
/// engine's result table.
fn cross_validate(fixture: &str, model: &SpecificationModel, params: &[(&str, Sql)]) {
    let cube = support::cube(model, &support::read_package(&support::fixture_dir(fixture)));
    let conn = support::sqlite::load(&cube);
    let sql_params: BTreeMap<&str, Sql> = params.iter().cloned().collect();
    let bindings: HashMap<String, String> = params
        .iter()
        .map(|(k, v)| {
            let text = match v {
                Sql::Integer(i) => i.to_string(),
                Sql::Text(s) => s.clone(),
                other => panic!("{other:?}"),
            };
            (k.to_string(), text)
        })
        .collect();
    let mut checked = 0;
    for uc in &model.use_cases {
        for op in &uc.operations {
            let engine = run_use_case(&cube, &uc.id, &op.id, &bindings).unwrap();
            let sql = gen_olap_sql(model, &uc.id, &op.id).unwrap();
            let (columns, rows) = support::sqlite::query(&conn, &sql, &sql_params);
            if let Err(e) = support::sqlite::compare(&engine, &columns, &rows) {
                panic!("{}/{}: {e}\n{sql}", uc.id, op.id);
            }
            checked += 1;
        }
    }
    assert!(checked >= 14, "{checked}");
}

#[test]
fn generated_sql_matches_engine_on_small_fixture() {
    let city = Sql::Text("00000000-0000-4000-8000-00000000c001".into());
    cross_validate("medbuddy-small", &with_pivot(), &[("year", Sql::Integer(2023)), ("id", city)]);
}

#[test]
fn generated_sql_matches_engine_on_synthetic_fixture() {
    let cube = support::cube(&support::medbuddy(), &support::read_package(&support::fixture_dir("medbuddy-synthetic")));
    let city = cube.table("City").unwrap().rows[0][0].to_string();
    for year in [2022, 2023, 2024] {
        cross_validate("medbuddy-synthetic", &with_pivot(), &[("year", Sql::Integer(year)), ("id", Sql::Text(city.clone()))]);
    }
}

#[test]
fn generators_ignore_declaration_order() {
    let m = support::medbuddy();
    let mut r = m.clone();
    r.entities.reverse();
    r.enumerations.reverse();
    r.use_cases.reverse();
    r.actors.reverse();
    r.ui_containers.reverse();
    assert_eq!(generate(&m, &[]), generate(&r, &[]));
}
