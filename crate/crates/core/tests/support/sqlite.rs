//! Loads a cube into an in-memory SQLite database created from the
//! generated DDL, and runs generated queries against it.

use std::collections::BTreeMap;

use cnlbi_core::gen::{gen_schema_sql, table_order};
use cnlbi_core::olap::{Cube, ResultTable, Value};
use rusqlite::types::Value as Sql;
use rusqlite::Connection;

pub fn to_sql(v: &Value) -> Sql {
    match v {
        Value::Null => Sql::Null,
        Value::Bool(b) => Sql::Integer(*b as i64),
        Value::Int(i) => Sql::Integer(*i),
        Value::Dec(d) => Sql::Real(*d),
        other => Sql::Text(other.to_string()),
    }
}

/// A database holding every table of `cube`, created by the generated schema.
pub fn load(cube: &Cube) -> Connection {
    let model = cube.model();
    let conn = Connection::open_in_memory().unwrap();
    conn.execute_batch("PRAGMA foreign_keys = ON;").unwrap();
    conn.execute_batch(&gen_schema_sql(model).unwrap()).unwrap();
    for e in table_order(model).unwrap() {
        let t = cube.table(&e.id).unwrap();
        let cols: Vec<String> = t.columns.iter().map(|c| format!("\"{c}\"")).collect();
        let marks: Vec<&str> = t.columns.iter().map(|_| "?").collect();
        let sql = format!("INSERT INTO \"{}\" ({}) VALUES ({})", e.id, cols.join(", "), marks.join(", "));
        let mut stmt = conn.prepare(&sql).unwrap();
        for row in &t.rows {
            stmt.execute(rusqlite::params_from_iter(row.iter().map(to_sql))).unwrap();
        }
    }
    conn
}

/// Runs `sql`, binding each `:name` placeholder from `params`.
pub fn query(conn: &Connection, sql: &str, params: &BTreeMap<&str, Sql>) -> (Vec<String>, Vec<Vec<Sql>>) {
    let mut stmt = conn.prepare(sql).unwrap_or_else(|e| panic!("{e}\n{sql}"));
    for i in 1..=stmt.parameter_count() {
        let name = stmt.parameter_name(i).unwrap().trim_start_matches(':').to_string();
        let v = params.get(name.as_str()).unwrap_or_else(|| panic!("no value for :{name}"));
        stmt.raw_bind_parameter(i, v).unwrap();
    }
    let columns: Vec<String> = stmt.column_names().iter().map(|c| c.to_string()).collect();
    let mut rows = Vec::new();
    let mut it = stmt.raw_query();
    while let Some(r) = it.next().unwrap() {
        rows.push((0..columns.len()).map(|i| r.get::<_, Sql>(i).unwrap()).collect());
    }
    (columns, rows)
}

/// Engine cell against SQL cell: integers and text exactly, numbers within 1e-9.
pub fn same_cell(engine: &Value, sql: &Sql) -> bool {
    match (engine, sql) {
        (Value::Null, Sql::Null) => true,
        (Value::Int(a), Sql::Integer(b)) => a == b,
        (Value::Bool(a), Sql::Integer(b)) => (*a as i64) == *b,
        (Value::Dec(a), Sql::Real(b)) => (a - b).abs() <= 1e-9,
        (Value::Dec(a), Sql::Integer(b)) => (a - *b as f64).abs() <= 1e-9,
        (Value::Null | Value::Int(_) | Value::Dec(_) | Value::Bool(_), _) => false,
        (v, Sql::Text(s)) => v.to_string() == *s,
        _ => false,
    }
}

/// `Err` describes the first difference between an engine result and SQL rows.
pub fn compare(engine: &ResultTable, columns: &[String], rows: &[Vec<Sql>]) -> Result<(), String> {
    if engine.columns != columns {
        return Err(format!("columns differ: engine {:?}, sql {columns:?}", engine.columns));
    }
    if engine.rows.len() != rows.len() {
        return Err(format!("engine has {} rows, sql {}", engine.rows.len(), rows.len()));
    }
    // SQLite orders text by bytes as the engine does, and nulls first.
    for (n, (e, s)) in engine.rows.iter().zip(rows).enumerate() {
        for (c, (a, b)) in e.iter().zip(s).enumerate() {
            if !same_cell(a, b) {
                return Err(format!("row {n}, column {}: engine {a:?}, sql {b:?}", columns[c]));
            }
        }
    }
    Ok(())
}
