use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus(name: &str) -> String {
    repo().join("corpus").join(name).to_string_lossy().into_owned()
}

fn cnlbi(args: &[&str]) -> Output {
    cnlbi_with_stdin(args, None)
}

fn cnlbi_with_stdin(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cnlbi"))
        .args(args)
        .env("CNLBI_COLOR", "never")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    if let Some(input) = stdin {
        pipe.write_all(input).unwrap();
    }
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

const UC: &str = "AnalysisAppointmentsInstitutionOnNationalLevel";

#[test]
fn check_corpus_succeeds() {
    for name in ["medbuddy.cnlbi", "medbuddy.asl"] {
        let o = cnlbi(&["check", &corpus(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", text(&o.stderr));
        assert!(text(&o.stdout).is_empty());
    }
}

#[test]
fn check_json_emits_one_object_per_line() {
    let o = cnlbi(&["check", "--json", &corpus("medbuddy.cnlbi")]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = text(&o.stderr).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|l| l["code"] == "SEM040" && l["severity"] == "warning"));
}

#[test]
fn converted_document_checks_and_matches_direct_parse() {
    let asl = cnlbi(&["convert", &corpus("medbuddy.cnlbi"), "--to", "asl"]);
    assert_eq!(asl.status.code(), Some(0), "{}", text(&asl.stderr));
    let o = cnlbi_with_stdin(&["check", "-", "--syntax", "asl"], Some(&asl.stdout));
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));

    let direct = cnlbi(&["parse", &corpus("medbuddy.cnlbi"), "--emit", "model-json"]);
    let via_asl = cnlbi_with_stdin(&["parse", "-", "--syntax", "asl", "--emit", "model-json"], Some(&asl.stdout));
    let direct: cnlbi_core::model::SpecificationModel = serde_json::from_slice(&direct.stdout).unwrap();
    let via_asl: cnlbi_core::model::SpecificationModel = serde_json::from_slice(&via_asl.stdout).unwrap();
    assert_eq!(cnlbi_core::model::canonicalize(&direct), cnlbi_core::model::canonicalize(&via_asl));
}

#[test]
fn stdin_requires_explicit_syntax() {
    let o = cnlbi_with_stdin(&["check", "-"], Some(b""));
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o.stderr).contains("--syntax"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cnlbi(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cnlbi(&["convert", &corpus("medbuddy.cnlbi")]).status.code(), Some(2));
    assert_eq!(cnlbi(&["check", "/no/such/file.cnlbi"]).status.code(), Some(2));
}

#[test]
fn errors_exit_1_with_rendered_span() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cnlbi");
    std::fs::write(&bad, "Data enumeration E with values A and A.\n").unwrap();
    let o = cnlbi(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = text(&o.stderr);
    assert!(err.contains("error[SEM005]"), "{err}");
    assert!(err.contains("bad.cnlbi:1:"), "{err}");
}

#[test]
fn olap_without_binding_is_eng010() {
    let o = cnlbi(&[
        "olap",
        &corpus("medbuddy.cnlbi"),
        "--data",
        &repo().join("fixtures/medbuddy-small").to_string_lossy(),
        "--usecase",
        UC,
        "--op",
        "ScheduledAppointmentsInSpecificYear",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o.stderr).contains("ENG010"));
}

#[test]
fn olap_outputs_csv_and_table() {
    let data = repo().join("fixtures/medbuddy-small").to_string_lossy().into_owned();
    let base = ["olap", &corpus("medbuddy.cnlbi"), "--data", &data, "--usecase", UC];
    let mut args = base.to_vec();
    args.extend(["--op", "ScheduledAppointmentsInSpecificYear", "--bind", "year=2023"]);
    let o = cnlbi(&args);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
    let csv = text(&o.stdout);
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("row_count,CountAppointments,"));
    assert!(lines.next().unwrap().starts_with("4,4,2,0.5,6,"));

    let mut args = base.to_vec();
    args.extend(["--op", "AppointmentsByInstitutionCity", "--format", "table"]);
    let o = cnlbi(&args);
    assert_eq!(o.status.code(), Some(0));
    let table = text(&o.stdout);
    assert!(table.lines().next().unwrap().starts_with("Institution.city  CountAppointments"));
    assert!(table.contains("Lisbon"));
}

#[test]
fn gen_writes_every_artifact_into_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = cnlbi(&["gen", &corpus("medbuddy.cnlbi"), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
    for f in ["schema.sql", "dashboard.json", "requirements.md"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let queries: Vec<_> = std::fs::read_dir(out.join("queries")).unwrap().collect();
    assert_eq!(queries.len(), 13);
    assert!(out.join("queries").join(format!("{UC}__AppointmentsByInstitutionCity.sql")).is_file());
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1, "nothing is written beside --out-dir");
}

#[test]
fn gen_only_restricts_output() {
    let dir = tempfile::tempdir().unwrap();
    let o = cnlbi(&["gen", &corpus("medbuddy.cnlbi"), "--out-dir", dir.path().to_str().unwrap(), "--only", "sql,doc"]);
    assert_eq!(o.status.code(), Some(0));
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names, ["requirements.md", "schema.sql"]);
}

#[test]
fn gen_reports_underspecified_operations() {
    let dir = tempfile::tempdir().unwrap();
    let o = cnlbi(&["gen", &corpus("medbuddy.asl"), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o.stderr).contains("GEN010"));
    assert!(dir.path().join("schema.sql").is_file());
}

#[test]
fn fmt_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["medbuddy.cnlbi", "medbuddy.asl"] {
        let once = cnlbi(&["fmt", &corpus(name)]);
        assert_eq!(once.status.code(), Some(0), "{}", text(&once.stderr));
        let path = dir.path().join(name);
        std::fs::write(&path, &once.stdout).unwrap();
        let twice = cnlbi(&["fmt", path.to_str().unwrap()]);
        assert_eq!(text(&once.stdout), text(&twice.stdout), "{name}");
    }
}
