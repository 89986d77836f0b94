use serde::Serialize;

use super::Value;

/// Result of an aggregation or of a filter summary.
///
/// The first `group_keys.len()` columns hold the group key; the remaining
/// columns hold one measure each. Rows are sorted by group key and no two
/// rows share a key.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub group_keys: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    /// `(row axis, column axis)` for two-key results.
    pub axis_order: Option<(String, String)>,
}

#[derive(Serialize)]
struct Record<'a>(&'a [String]);

impl ResultTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Value at `row` in the column called `name`.
    pub fn get(&self, row: usize, name: &str) -> Option<&Value> {
        self.rows.get(row)?.get(self.column(name)?)
    }

    /// RFC 4180 CSV with a header row; nulls are empty fields.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.serialize(Record(&self.columns)).expect("write to memory");
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Value::to_csv_field).collect();
            w.serialize(Record(&fields)).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is UTF-8")
    }

    /// Columns padded to a common width, numbers right-aligned.
    pub fn to_text_table(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| {
                cells.iter().map(|r| r[i].chars().count()).chain([self.columns[i].chars().count()]).max().unwrap_or(0)
            })
            .collect();
        let numeric: Vec<bool> = (0..self.columns.len())
            .map(|i| !self.rows.is_empty() && self.rows.iter().all(|r| matches!(r[i], Value::Int(_) | Value::Dec(_) | Value::Null)))
            .collect();
        let line = |fields: &[String]| -> String {
            let padded: Vec<String> = fields
                .iter()
                .enumerate()
                .map(|(i, f)| if numeric[i] { format!("{f:>w$}", w = widths[i]) } else { format!("{f:<w$}", w = widths[i]) })
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.columns);
        out.push('\n');
        out.push_str(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
        out.push('\n');
        for r in &cells {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}
