mod support;

use std::collections::BTreeMap;

use cnlbi_core::model::{AttributePath, Literal, Operand, Predicate};
use cnlbi_core::olap::{
    aggregate, dice, load_cube, load_tables, pivot, run_use_case, slice, Bindings, Cube, EngineError, Value,
};
use support::oracle::{Data, Key, MEASURES};
use support::{compare_groups, engine_groups, fixture_dir, medbuddy, read_package};

const INSTITUTION_NATIONAL: &str = "AnalysisAppointmentsInstitutionOnNationalLevel";
const PATIENT_NATIONAL: &str = "AnalysisAppointmentsPatientOnNationalLevel";
const PORTO: &str = "00000000-0000-4000-8000-00000000c001";

fn small() -> Cube {
    load_cube(&medbuddy(), &fixture_dir("medbuddy-small")).unwrap_or_else(|d| panic!("{d:#?}"))
}

fn path(s: &str) -> AttributePath {
    s.parse().unwrap()
}

fn bind(pairs: &[(&str, &str)]) -> Bindings {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn year_is(y: &str) -> (Predicate, Bindings) {
    let p = Predicate { left: path("AppointmentRequest.scheduled_date.year"), right: Operand::Path(path("Time.year")) };
    (p, bind(&[("year", y)]))
}

#[test]
fn small_fixture_loads_with_five_joins() {
    let cube = small();
    assert_eq!(cube.table("AppointmentRequest").unwrap().len(), 6);
    let joins = cube.joins("AppointmentRequest");
    let targets: Vec<&str> = joins.iter().map(|(_, d, _)| d.as_str()).collect();
    assert_eq!(targets, ["Institution", "Patient", "RequestState", "Time", "Time"]);
}

#[test]
fn grand_totals_on_the_small_fixture() {
    let cube = small();
    let view = cube.view("AppointmentRequest").unwrap();
    let t = aggregate(&cube, &view, &[], &MEASURES).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.get(0, "CountAppointments"), Some(&Value::Int(6)));
    assert_eq!(t.get(0, "CountCancelledAppointments"), Some(&Value::Int(2)));
    let Some(Value::Dec(rate)) = t.get(0, "CancellationRate") else { panic!() };
    assert!((rate - 2.0 / 6.0).abs() < 1e-12);
    // 20, 5, 12, 1, 9; the open appointment has no response time
    assert_eq!(t.get(0, "AvgWaitingTime"), Some(&Value::Dec(9.4)));
    assert_eq!(t.get(0, "MinDate").unwrap().to_string(), "2022-11-03");
    assert_eq!(t.get(0, "MaxDate").unwrap().to_string(), "2024-01-08");
}

#[test]
fn slice_by_year_keeps_four_rows() {
    let cube = small();
    let view = cube.view("AppointmentRequest").unwrap();
    let (p, b) = year_is("2023");
    let v = slice(&cube, &view, &p, &b).unwrap();
    assert_eq!(v.rows.len(), 4);
    assert_eq!(slice(&cube, &v, &p, &b).unwrap().rows, v.rows);
    let (p, b) = year_is("1999");
    assert!(slice(&cube, &view, &p, &b).unwrap().rows.is_empty());
}

#[test]
fn dice_city_and_year() {
    let cube = small();
    let view = cube.view("AppointmentRequest").unwrap();
    let (year, _) = year_is("2023");
    let city = Predicate { left: path("Institution.city"), right: Operand::Path(path("City.id")) };
    let b = bind(&[("year", "2023"), ("City.id", PORTO)]);
    let diced = dice(&cube, &view, &[city.clone(), year.clone()], &b).unwrap();
    assert_eq!(diced.rows.len(), 2);
    let composed = slice(&cube, &slice(&cube, &view, &city, &b).unwrap(), &year, &b).unwrap();
    assert_eq!(diced.rows, composed.rows);
    let b2 = bind(&[("year", "2022")]);
    let v = slice(&cube, &diced, &year_is("2022").0, &b2).unwrap();
    assert!(v.rows.is_empty());
}

#[test]
fn enum_literal_comparison_goes_through_the_state_dimension() {
    let cube = small();
    let view = cube.view("AppointmentRequest").unwrap();
    let p = Predicate { left: path("state"), right: Operand::Path(path("States.Cancelled")) };
    assert_eq!(slice(&cube, &view, &p, &Bindings::new()).unwrap().rows.len(), 2);
    let p = Predicate { left: path("Patient.gender"), right: Operand::Literal(Literal::Text("Female".into())) };
    assert_eq!(slice(&cube, &view, &p, &Bindings::new()).unwrap().rows.len(), 3);
}

#[test]
fn group_by_institution_city_uses_city_names() {
    let cube = small();
    let t = run_use_case(&cube, INSTITUTION_NATIONAL, "AppointmentsByInstitutionCity", &Bindings::new()).unwrap();
    let keys: Vec<String> = t.rows.iter().map(|r| r[0].to_string()).collect();
    assert_eq!(keys, ["Lisbon", "Porto"]);
    assert_eq!(t.get(0, "CountAppointments"), Some(&Value::Int(2)));
    assert_eq!(t.get(1, "CountAppointments"), Some(&Value::Int(4)));
}

#[test]
fn grouping_through_a_nullable_reference_forms_a_null_group() {
    let cube = small();
    let view = cube.view("AppointmentRequest").unwrap();
    let t = aggregate(&cube, &view, &[path("AppointmentRequest.closed_date")], &["CountAppointments"]).unwrap();
    assert_eq!(t.rows[0][0], Value::Null);
    assert_eq!(t.rows[0][1], Value::Int(1));
}

#[test]
fn empty_view_measures_are_total() {
    let cube = small();
    let view = cube.view("AppointmentRequest").unwrap();
    let (p, b) = year_is("1999");
    let empty = slice(&cube, &view, &p, &b).unwrap();
    let t = aggregate(&cube, &empty, &[], &MEASURES).unwrap();
    assert_eq!(t.get(0, "CountAppointments"), Some(&Value::Int(0)));
    assert_eq!(t.get(0, "CancellationRate"), Some(&Value::Null));
    assert_eq!(t.get(0, "AvgWaitingTime"), Some(&Value::Null));
    assert_eq!(t.get(0, "MinDate"), Some(&Value::Null));
    let grouped = aggregate(&cube, &empty, &[path("Institution.city")], &MEASURES).unwrap();
    assert!(grouped.rows.is_empty());
}

#[test]
fn slice_use_case_returns_a_summary() {
    let cube = small();
    let op = "ScheduledAppointmentsInSpecificYear";
    let t = run_use_case(&cube, INSTITUTION_NATIONAL, op, &bind(&[("year", "2023")])).unwrap();
    assert_eq!(t.columns[0], "row_count");
    assert_eq!(t.get(0, "row_count"), Some(&Value::Int(4)));
    assert_eq!(t.get(0, "CountCancelledAppointments"), Some(&Value::Int(2)));
    assert_eq!(t.get(0, "CancellationRate"), Some(&Value::Dec(0.5)));
    assert_eq!(t.get(0, "AvgWaitingTime"), Some(&Value::Dec(6.0)));
    let err = run_use_case(&cube, INSTITUTION_NATIONAL, op, &Bindings::new()).unwrap_err();
    assert_eq!(err.code(), "ENG010");
    let err = run_use_case(&cube, INSTITUTION_NATIONAL, op, &bind(&[("year", "soon")])).unwrap_err();
    assert_eq!(err.code(), "ENG011");
}

#[test]
fn unknown_ids_are_reported() {
    let cube = small();
    let err = run_use_case(&cube, INSTITUTION_NATIONAL, "Nope", &Bindings::new()).unwrap_err();
    assert!(matches!(err, EngineError::UnknownOperation { .. }));
    assert_eq!(err.code(), "ENG030");
    assert_eq!(run_use_case(&cube, "Nope", "x", &Bindings::new()).unwrap_err().code(), "ENG030");
}

#[test]
fn pivot_transposes_and_is_an_involution() {
    let cube = small();
    let view = cube.view("AppointmentRequest").unwrap();
    let t = aggregate(
        &cube,
        &view,
        &[path("Institution.city"), path("AppointmentRequest.scheduled_date.year")],
        &["CountAppointments"],
    )
    .unwrap();
    let p = pivot(&t).unwrap();
    assert_eq!(p.axis_order, Some(("AppointmentRequest.scheduled_date.year".into(), "Institution.city".into())));
    let mut cells: Vec<_> = t.rows.iter().map(|r| (r[0].clone(), r[1].clone(), r[2].clone())).collect();
    let mut swapped: Vec<_> = p.rows.iter().map(|r| (r[1].clone(), r[0].clone(), r[2].clone())).collect();
    cells.sort();
    swapped.sort();
    assert_eq!(cells, swapped);
    assert_eq!(pivot(&p).unwrap(), t);
    let one = aggregate(&cube, &view, &[path("Institution.city")], &[]).unwrap();
    assert_eq!(pivot(&one).unwrap_err().code(), "ENG020");
}

#[test]
fn results_render_as_csv_and_text() {
    let cube = small();
    let t = run_use_case(&cube, PATIENT_NATIONAL, "AppointmentsByGender", &Bindings::new()).unwrap();
    let csv = t.to_csv();
    assert!(csv.starts_with("Patient.gender,CountAppointments,CountCancelledAppointments,"), "{csv}");
    assert!(csv.contains("\nFemale,3,0,0,"), "{csv}");
    assert!(t.to_text_table().lines().count() == 4);
}

#[test]
fn every_grouping_matches_the_oracle_on_the_small_fixture() {
    let model = medbuddy();
    let sources = read_package(&fixture_dir("medbuddy-small"));
    let cube = load_tables(&model, &sources).unwrap();
    let data = Data::new(&sources);
    let view = cube.view("AppointmentRequest").unwrap();
    for key in Key::ALL {
        let t = aggregate(&cube, &view, &[path(key.path())], &MEASURES).unwrap();
        let oracle = data.group(&data.facts(), &[key]).into_iter().map(|(k, rows)| (k, data.measures(&rows))).collect();
        compare_groups(&engine_groups(&t), &oracle).unwrap_or_else(|e| panic!("{key:?}: {e}"));
    }
}

fn with_file(name: &str, edit: impl Fn(&str) -> String) -> BTreeMap<String, (String, String)> {
    let mut sources = read_package(&fixture_dir("medbuddy-small"));
    for (file, text) in sources.values_mut() {
        if file == name {
            *text = edit(text);
        }
    }
    sources
}

fn load_codes(sources: &BTreeMap<String, (String, String)>) -> Vec<String> {
    match load_tables(&medbuddy(), sources) {
        Ok(_) => Vec::new(),
        Err(d) => d.into_iter().map(|d| d.code).collect(),
    }
}

#[test]
fn load_errors() {
    let dangling = with_file("appointment_request.csv", |t| t.replacen("00000000b001", "00000000b999", 1));
    assert_eq!(load_codes(&dangling), ["ENG004"]);
    let header = with_file("city.csv", |t| t.replacen("latitude", "lat", 1));
    assert_eq!(load_codes(&header), ["ENG002"]);
    let bad_int = with_file("patient.csv", |t| t.replacen(",34,", ",old,", 1));
    assert_eq!(load_codes(&bad_int), ["ENG003"]);
    let bad_enum = with_file("patient.csv", |t| t.replacen("Female", "F", 1));
    assert_eq!(load_codes(&bad_enum), ["ENG003"]);
    let missing_not_null = with_file("patient.csv", |t| t.replacen(",34,", ",,", 1));
    assert_eq!(load_codes(&missing_not_null), ["ENG003"]);
    let mut missing = read_package(&fixture_dir("medbuddy-small"));
    missing.remove("Time");
    assert_eq!(load_codes(&missing), ["ENG001"]);
    let err = load_cube(&medbuddy(), &fixture_dir("no-such-package")).unwrap_err();
    assert_eq!(err[0].code, "ENG001");
}

#[test]
fn header_only_fact_file_is_an_empty_cube() {
    let empty = with_file("appointment_request.csv", |t| t.lines().next().unwrap().to_string() + "\n");
    let cube = load_tables(&medbuddy(), &empty).unwrap();
    let view = cube.view("AppointmentRequest").unwrap();
    let t = aggregate(&cube, &view, &[], &["CountAppointments", "CancellationRate"]).unwrap();
    assert_eq!(t.rows, vec![vec![Value::Int(0), Value::Null]]);
}

/// Writes the committed synthetic fixture; run with `--ignored` after
/// changing the generator.
#[test]
#[ignore]
fn regenerate_synthetic_fixture() {
    let dir = fixture_dir("medbuddy-synthetic");
    std::fs::create_dir_all(&dir).unwrap();
    let package = support::synthetic::package(2024, 480);
    std::fs::write(dir.join("manifest.toml"), support::synthetic::manifest(&package)).unwrap();
    for (file, text) in package.values() {
        std::fs::write(dir.join(file), text).unwrap();
    }
}
