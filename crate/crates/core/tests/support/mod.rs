#![allow(dead_code)]

pub mod oracle;
pub mod sqlite;
pub mod synthetic;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use cnlbi_core::model::SpecificationModel;
use cnlbi_core::olap::{load_tables, Cube};
use cnlbi_core::syntax::parse_cnlbi;

pub fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn corpus(name: &str) -> String {
    let path = repo().join("corpus").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn fixture_dir(name: &str) -> PathBuf {
    repo().join("fixtures").join(name)
}

/// The MEDBuddy model parsed from the CNL-BI corpus.
pub fn medbuddy() -> SpecificationModel {
    let p = parse_cnlbi(&corpus("medbuddy.cnlbi"));
    assert!(p.diagnostics.iter().all(|d| !d.is_error()), "{:#?}", p.diagnostics);
    p.model
}

/// `entity -> (file, text)` for every CSV named in a fixture's manifest.
pub fn read_package(dir: &Path) -> BTreeMap<String, (String, String)> {
    let manifest = std::fs::read_to_string(dir.join("manifest.toml")).unwrap();
    let entries: BTreeMap<String, String> = toml::from_str(&manifest).unwrap();
    entries
        .into_iter()
        .map(|(entity, file)| {
            let text = std::fs::read_to_string(dir.join(&file)).unwrap();
            (entity, (file, text))
        })
        .collect()
}

pub fn cube(model: &SpecificationModel, sources: &BTreeMap<String, (String, String)>) -> Cube {
    load_tables(model, sources).unwrap_or_else(|d| panic!("{d:#?}"))
}

use cnlbi_core::olap::{ResultTable, Value};
use oracle::{Measures, MEASURES};

/// The measure columns of an engine result, keyed by the group key as text.
pub fn engine_groups(table: &ResultTable) -> BTreeMap<Vec<String>, Measures> {
    let n = table.group_keys.len();
    let col = |row: &[Value], m: &str| row[table.column(m).unwrap()].clone();
    table
        .rows
        .iter()
        .map(|row| {
            let key = row[..n].iter().map(ToString::to_string).collect();
            let int = |m| match col(row, m) {
                Value::Int(i) => i,
                other => panic!("{m} is {other:?}"),
            };
            let dec = |m| match col(row, m) {
                Value::Null => None,
                Value::Dec(d) => Some(d),
                other => panic!("{m} is {other:?}"),
            };
            let date = |m| match col(row, m) {
                Value::Null => None,
                v @ Value::Date(_) => Some(v.to_string()),
                other => panic!("{m} is {other:?}"),
            };
            let m = Measures {
                count: int(MEASURES[0]),
                cancelled: int(MEASURES[1]),
                rate: dec(MEASURES[2]),
                avg_wait: dec(MEASURES[3]),
                min_date: date(MEASURES[4]),
                max_date: date(MEASURES[5]),
            };
            (key, m)
        })
        .collect()
}

/// Integers and dates exactly, decimals within 1e-9.
pub fn same_measures(a: &Measures, b: &Measures) -> bool {
    let close = |x: Option<f64>, y: Option<f64>| match (x, y) {
        (Some(x), Some(y)) => (x - y).abs() <= 1e-9,
        (None, None) => true,
        _ => false,
    };
    a.count == b.count
        && a.cancelled == b.cancelled
        && close(a.rate, b.rate)
        && close(a.avg_wait, b.avg_wait)
        && a.min_date == b.min_date
        && a.max_date == b.max_date
}

/// Compares engine groups with oracle groups; `Err` describes the first difference.
pub fn compare_groups(
    engine: &BTreeMap<Vec<String>, Measures>,
    oracle: &BTreeMap<Vec<String>, Measures>,
) -> Result<(), String> {
    let ek: Vec<_> = engine.keys().collect();
    let ok: Vec<_> = oracle.keys().collect();
    if ek != ok {
        return Err(format!("group keys differ: engine {ek:?}, oracle {ok:?}"));
    }
    for (k, e) in engine {
        if !same_measures(e, &oracle[k]) {
            return Err(format!("group {k:?}: engine {e:?}, oracle {:?}", oracle[k]));
        }
    }
    Ok(())
}
