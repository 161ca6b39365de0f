//! Tabular output (CSV or JSON) and the run manifest.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};
use walshlog::fmt::format_float;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Rows of pre-formatted cells under fixed headers.
#[derive(Debug, Clone, Default)]
pub struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Self {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        out.write_record(&self.headers)?;
        for row in &self.rows {
            out.write_record(row)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Rows as objects; cells that read as numbers become JSON numbers.
    fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .headers
                    .iter()
                    .zip(row)
                    .map(|(h, cell)| (h.to_string(), json_cell(cell)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }

    pub fn write<W: Write>(&self, format: Format, mut w: W) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => {
                serde_json::to_writer_pretty(&mut w, &self.to_json())?;
                writeln!(w)?;
                Ok(())
            }
        }
    }
}

fn json_cell(cell: &str) -> Value {
    if let Ok(i) = cell.parse::<i64>() {
        return json!(i);
    }
    match cell.parse::<f64>() {
        Ok(x) if x.is_finite() => json!(x),
        _ => Value::String(cell.to_string()),
    }
}

pub fn float(x: f64) -> String {
    format_float(x)
}

pub fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest.json")
}

/// Writes the table to `out` (stdout when `None`) and the manifest beside
/// it (to stderr when writing to stdout).
pub fn emit(table: &Table, format: Format, out: Option<&Path>, manifest: &Value) -> Result<()> {
    match out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            table.write(format, BufWriter::new(file))?;
            let mpath = manifest_path(path);
            let file = File::create(&mpath).with_context(|| format!("cannot create {}", mpath.display()))?;
            serde_json::to_writer_pretty(BufWriter::new(file), manifest)?;
        }
        None => {
            let stdout = io::stdout();
            table.write(format, stdout.lock())?;
            eprintln!("manifest: {manifest}");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json() {
        let mut t = Table::new(&["n", "value", "exact"]);
        t.push(vec!["4".into(), float(0.5), "3/2".into()]);
        let mut buf = Vec::new();
        t.write(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,value,exact\n4,0.5,3/2\n");
        assert_eq!(t.to_json(), json!([{"n": 4, "value": 0.5, "exact": "3/2"}]));
        assert_eq!(manifest_path(Path::new("a/b.csv")), PathBuf::from("a/b.manifest.json"));
    }
}
