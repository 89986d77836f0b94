use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use chrono::{NaiveDate, NaiveDateTime, NaiveTime};

use super::Value;
use crate::diag::Diagnostic;
use crate::model::{primary_key, AttributeType, Constraint, DataAttribute, PrimitiveType, SpecificationModel};

/// Rows of one entity, in file order.
#[derive(Debug, Clone)]
pub struct Table {
    pub entity: String,
    /// Stored attribute ids, in declaration order.
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    key_column: Option<usize>,
    index: HashMap<Value, usize>,
}

impl Table {
    pub fn column(&self, attr: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == attr)
    }

    /// Row whose primary key equals `key`.
    pub fn row_by_key(&self, key: &Value) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn key_column(&self) -> Option<usize> {
        self.key_column
    }
}

/// Loaded data for every entity of a checked model.
#[derive(Debug, Clone)]
pub struct Cube {
    model: SpecificationModel,
    tables: BTreeMap<String, Table>,
}

impl Cube {
    pub fn model(&self) -> &SpecificationModel {
        &self.model
    }

    pub fn table(&self, entity: &str) -> Option<&Table> {
        self.tables.get(entity)
    }

    pub fn tables(&self) -> impl Iterator<Item = &Table> {
        self.tables.values()
    }

    /// For every dimension reference of `fact`: attribute id, dimension id
    /// and the dimension's key column.
    pub fn joins(&self, fact: &str) -> Vec<(String, String, String)> {
        let Some(e) = self.model.entity(fact) else { return Vec::new() };
        e.dimension_refs()
            .filter_map(|(a, target)| {
                let pk = self.model.entity(target).and_then(primary_key)?;
                Some((a.id.clone(), target.to_string(), pk.id.clone()))
            })
            .collect()
    }
}

/// Reads `manifest.toml` in `dir` (lines `entity_id = "file.csv"`) and every
/// CSV file it names.
pub fn load_cube(model: &SpecificationModel, dir: &Path) -> Result<Cube, Vec<Diagnostic>> {
    let manifest_path = dir.join("manifest.toml");
    let manifest = std::fs::read_to_string(&manifest_path)
        .map_err(|e| vec![Diagnostic::error("ENG001", format!("{}: {e}", manifest_path.display()), None)])?;
    let entries: BTreeMap<String, toml::Value> = toml::from_str(&manifest)
        .map_err(|e| vec![Diagnostic::error("ENG001", format!("{}: {e}", manifest_path.display()), None)])?;
    let mut sources = BTreeMap::new();
    let mut diags = Vec::new();
    for e in &model.entities {
        let Some(file) = entries.get(&e.id).and_then(toml::Value::as_str) else {
            diags.push(Diagnostic::error("ENG001", format!("manifest names no file for entity `{}`", e.id), None));
            continue;
        };
        match std::fs::read_to_string(dir.join(file)) {
            Ok(text) => {
                sources.insert(e.id.clone(), (file.to_string(), text));
            }
            Err(err) => diags.push(Diagnostic::error("ENG001", format!("{file}: {err}"), None)),
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    load_tables(model, &sources)
}

/// Builds a cube from CSV text per entity: `entity -> (file name, text)`.
pub fn load_tables(model: &SpecificationModel, sources: &BTreeMap<String, (String, String)>) -> Result<Cube, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut tables = BTreeMap::new();
    for e in &model.entities {
        let Some((file, text)) = sources.get(&e.id) else {
            diags.push(Diagnostic::error("ENG001", format!("no data for entity `{}`", e.id), None));
            continue;
        };
        if let Some(t) = read_table(model, &e.id, file, text, &mut diags) {
            tables.insert(e.id.clone(), t);
        }
    }
    if diags.is_empty() {
        check_references(model, &tables, sources, &mut diags);
    }
    if diags.is_empty() {
        Ok(Cube { model: model.clone(), tables })
    } else {
        Err(diags)
    }
}

fn read_table(model: &SpecificationModel, entity: &str, file: &str, text: &str, diags: &mut Vec<Diagnostic>) -> Option<Table> {
    let e = model.entity(entity)?;
    let attrs: Vec<&DataAttribute> = e.stored_attributes().collect();
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header: Vec<String> = match reader.headers() {
        Ok(h) => h.iter().map(|s| s.trim().to_string()).collect(),
        Err(err) => {
            diags.push(Diagnostic::error("ENG002", format!("{file}: unreadable header: {err}"), None));
            return None;
        }
    };
    let missing: Vec<&str> = attrs.iter().map(|a| a.id.as_str()).filter(|a| !header.iter().any(|h| h == a)).collect();
    let extra: Vec<&str> = header.iter().map(String::as_str).filter(|h| !attrs.iter().any(|a| a.id == *h)).collect();
    if !missing.is_empty() || !extra.is_empty() || header.len() != attrs.len() {
        diags.push(Diagnostic::error(
            "ENG002",
            format!(
                "{file}: header does not match the attributes of `{entity}` (missing: [{}], unexpected: [{}])",
                missing.join(", "),
                extra.join(", ")
            ),
            None,
        ));
        return None;
    }
    // position of each declared attribute in the file
    let order: Vec<usize> = attrs.iter().map(|a| header.iter().position(|h| *h == a.id).unwrap()).collect();
    let key_column = attrs.iter().position(|a| a.is_primary_key());
    let mut rows = Vec::new();
    let mut index = HashMap::new();
    let before = diags.len();
    for (n, record) in reader.records().enumerate() {
        let line = n + 2;
        let record = match record {
            Ok(r) => r,
            Err(err) => {
                diags.push(Diagnostic::error("ENG003", format!("{file}: row {line}: {err}"), None));
                continue;
            }
        };
        let mut row = Vec::with_capacity(attrs.len());
        for (a, &pos) in attrs.iter().zip(&order) {
            let raw = record.get(pos).unwrap_or("");
            match coerce(model, a, raw) {
                Ok(v) => row.push(v),
                Err(msg) => {
                    diags.push(Diagnostic::error("ENG003", format!("{file}: row {line}, column `{}`: {msg}", a.id), None));
                    row.push(Value::Null);
                }
            }
        }
        if let Some(k) = key_column {
            if index.insert(row[k].clone(), rows.len()).is_some() {
                diags.push(Diagnostic::error(
                    "ENG003",
                    format!("{file}: row {line}, column `{}`: duplicate key `{}`", attrs[k].id, row[k]),
                    None,
                ));
            }
        }
        rows.push(row);
    }
    (diags.len() == before).then(|| Table {
        entity: entity.to_string(),
        columns: attrs.iter().map(|a| a.id.clone()).collect(),
        rows,
        key_column,
        index,
    })
}

/// Parses one CSV field as the declared type of `a`. Empty fields are null.
pub fn coerce(model: &SpecificationModel, a: &DataAttribute, raw: &str) -> Result<Value, String> {
    let raw = raw.trim();
    if raw.is_empty() {
        return if a.is_not_null() { Err("missing value in a non-null column".into()) } else { Ok(Value::Null) };
    }
    match &a.attr_type {
        AttributeType::Primitive { name, length } => {
            let v = parse_primitive(*name, raw)?;
            if let (Some(n), Value::Text(s)) = (length, &v) {
                if s.chars().count() > *n as usize {
                    return Err(format!("`{s}` is longer than {n} characters"));
                }
            }
            Ok(v)
        }
        AttributeType::EnumerationRef { enumeration } => match model.enumeration(enumeration) {
            Some(en) if en.values.iter().any(|v| v == raw) => Ok(Value::Text(raw.to_string())),
            _ => Err(format!("`{raw}` is not a value of `{enumeration}`")),
        },
        AttributeType::DimensionRef { entity } => {
            let key = model.entity(entity).and_then(primary_key);
            match key.map(|k| &k.attr_type) {
                Some(AttributeType::Primitive { name, .. }) => parse_primitive(*name, raw),
                _ => Ok(Value::Text(raw.to_string())),
            }
        }
        AttributeType::Extension { .. } => Ok(Value::Text(raw.to_string())),
    }
}

pub fn parse_primitive(ty: PrimitiveType, raw: &str) -> Result<Value, String> {
    let bad = || format!("`{raw}` is not a valid {ty}");
    match ty {
        PrimitiveType::Uuid => uuid::Uuid::parse_str(raw).map(|_| Value::Text(raw.to_string())).map_err(|_| bad()),
        PrimitiveType::Integer => raw.parse().map(Value::Int).map_err(|_| bad()),
        PrimitiveType::Decimal => match raw.parse::<f64>() {
            Ok(d) if d.is_finite() => Ok(Value::Dec(d)),
            _ => Err(bad()),
        },
        PrimitiveType::String => Ok(Value::Text(raw.to_string())),
        PrimitiveType::Boolean => match raw.to_ascii_lowercase().as_str() {
            "true" | "1" => Ok(Value::Bool(true)),
            "false" | "0" => Ok(Value::Bool(false)),
            _ => Err(bad()),
        },
        PrimitiveType::Date => NaiveDate::parse_from_str(raw, "%Y-%m-%d").map(Value::Date).map_err(|_| bad()),
        PrimitiveType::Time => NaiveTime::parse_from_str(raw, "%H:%M:%S").map(Value::Time).map_err(|_| bad()),
        PrimitiveType::DateTime => NaiveDateTime::parse_from_str(raw, "%Y-%m-%dT%H:%M:%S")
            .or_else(|_| NaiveDateTime::parse_from_str(raw, "%Y-%m-%d %H:%M:%S"))
            .map(Value::DateTime)
            .map_err(|_| bad()),
    }
}

fn check_references(
    model: &SpecificationModel,
    tables: &BTreeMap<String, Table>,
    sources: &BTreeMap<String, (String, String)>,
    diags: &mut Vec<Diagnostic>,
) {
    for e in &model.entities {
        let table = &tables[&e.id];
        let file = &sources[&e.id].0;
        for a in e.stored_attributes() {
            let targets = a.constraints.iter().filter_map(|c| match c {
                Constraint::ForeignKey(t) => Some(t.as_str()),
                _ => None,
            });
            let implied = match &a.attr_type {
                AttributeType::DimensionRef { entity } => Some(entity.as_str()),
                _ => None,
            };
            let col = table.column(&a.id).expect("stored attribute has a column");
            for target in implied.into_iter().chain(targets) {
                let Some(dim) = tables.get(target) else { continue };
                for (n, row) in table.rows.iter().enumerate() {
                    let v = &row[col];
                    if !v.is_null() && dim.row_by_key(v).is_none() {
                        diags.push(Diagnostic::error(
                            "ENG004",
                            format!("{file}: row {}, column `{}`: no `{target}` with key `{v}`", n + 2, a.id),
                            None,
                        ));
                    }
                }
            }
        }
    }
}
