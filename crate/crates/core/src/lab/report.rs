use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::numcore::Dataset;

/// Significant digits used when serializing numbers.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Shortest decimal form of `x` rounded to 12 significant digits.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    let r = round_sig(x);
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

/// Columnar numeric table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, columns: Vec<String>) -> Self {
        Self {
            name: name.to_string(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch in table {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|&v| json_number(v)).collect()))
            .collect();
        json!({
            "name": self.name,
            "columns": self.columns,
            "row_count": self.rows.len(),
            "rows": rows,
        })
    }
}

fn json_number(v: f64) -> Value {
    serde_json::Number::from_f64(round_sig(v)).map_or(Value::Null, Value::Number)
}

/// Output of one experiment run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentReport {
    pub label: String,
    pub tables: Vec<Table>,
    pub flags: BTreeMap<String, bool>,
    pub scalars: BTreeMap<String, f64>,
    pub provenance: BTreeMap<String, String>,
}

impl ExperimentReport {
    pub fn new(label: &str) -> Self {
        Self {
            label: label.to_string(),
            ..Self::default()
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn flag(&self, name: &str) -> Option<bool> {
        self.flags.get(name).copied()
    }

    pub fn scalar(&self, name: &str) -> Option<f64> {
        self.scalars.get(name).copied()
    }

    /// Merges tables, flags, scalars and provenance of `other` into `self`.
    pub fn absorb(&mut self, other: ExperimentReport) {
        self.tables.extend(other.tables);
        self.flags.extend(other.flags);
        self.scalars.extend(other.scalars);
        self.provenance.extend(other.provenance);
    }

    pub fn to_json(&self) -> String {
        let scalars: serde_json::Map<String, Value> = self
            .scalars
            .iter()
            .map(|(k, &v)| (k.clone(), json_number(v)))
            .collect();
        let envelope = json!({
            "label": self.label,
            "provenance": self.provenance,
            "flags": self.flags,
            "scalars": scalars,
            "tables": self.tables.iter().map(Table::to_json).collect::<Vec<_>>(),
        });
        let mut s = serde_json::to_string_pretty(&envelope).expect("report serializes");
        s.push('\n');
        s
    }

    /// Writes `<label>_<table>.csv` per table and `<label>.json`.
    pub fn write(&self, out_dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(out_dir)?;
        let mut written = Vec::new();
        for table in &self.tables {
            let path = out_dir.join(format!("{}_{}.csv", self.label, table.name));
            std::fs::write(&path, table.to_csv())?;
            written.push(path);
        }
        let path = out_dir.join(format!("{}.json", self.label));
        std::fs::write(&path, self.to_json())?;
        written.push(path);
        Ok(written)
    }
}

/// SHA-256 over the shape, column names and values of a dataset.
pub fn dataset_hash(d: &Dataset) -> String {
    let mut hasher = Sha256::new();
    hasher.update((d.n() as u64).to_le_bytes());
    hasher.update((d.p() as u64).to_le_bytes());
    for name in d.names() {
        hasher.update(name.as_bytes());
        hasher.update([0u8]);
    }
    for v in d.x().iter().chain(d.y().iter()) {
        hasher.update(v.to_le_bytes());
    }
    hex::encode(hasher.finalize())
}

pub(crate) fn check_rows(report: &ExperimentReport) -> Result<()> {
    for t in &report.tables {
        if t.rows.iter().any(|r| r.len() != t.columns.len()) {
            return Err(Error::InvalidData(format!("ragged table {}", t.name)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_twelve_digits() {
        assert_eq!(format_number(1.48), "1.48");
        assert_eq!(format_number(0.1 + 0.2), "0.3");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_number(-2.0e-20), "-0.00000000000000000002");
        assert_eq!(format_number(0.0), "0");
    }

    #[test]
    fn writes_csv_and_json() {
        let mut report = ExperimentReport::new("demo");
        let mut t = Table::new("df", vec!["k".into(), "df_trace".into()]);
        t.push(vec![1.0, 1.4800000000001]);
        report.tables.push(t);
        report.flags.insert("ok".into(), true);
        let dir = tempfile::tempdir().unwrap();
        let files = report.write(dir.path()).unwrap();
        assert_eq!(files.len(), 2);
        let csv = std::fs::read_to_string(dir.path().join("demo_df.csv")).unwrap();
        assert_eq!(csv, "k,df_trace\n1,1.48\n");
        let json: Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["tables"][0]["row_count"], 1);
        assert_eq!(json["flags"]["ok"], true);
    }
}
