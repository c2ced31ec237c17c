use std::io::Write;

use serde_json::{Map, Value};

use crate::cli::Format;
use crate::error::{invalid, AppResult};

/// A table with header metadata, written as csv or json.
#[derive(Debug, Default)]
pub struct Report {
    pub command: &'static str,
    pub meta: Vec<(String, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    /// Structured payload appended to json output only.
    pub detail: Option<Value>,
}

impl Report {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Self { command, columns: columns.to_vec(), ..Self::default() }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn row(&mut self, values: Vec<Value>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }
}

/// Non-finite floats become json null, written as `none` in csv; `-0` prints as `0`.
pub fn num(x: f64) -> Value {
    let x = if x == 0.0 { 0.0 } else { x };
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn write(report: &Report, format: Format, seed: u64, out: &mut dyn Write) -> AppResult<()> {
    let io = |e: std::io::Error| invalid(format!("cannot write output: {e}"));
    match format {
        Format::Csv => {
            writeln!(out, "# fracdom {} seed={seed}", report.command).map_err(io)?;
            for (k, v) in &report.meta {
                writeln!(out, "# {k}={}", cell(v)).map_err(io)?;
            }
            let mut w = csv::Writer::from_writer(out);
            let err = |e: csv::Error| invalid(format!("cannot write output: {e}"));
            w.write_record(&report.columns).map_err(err)?;
            for row in &report.rows {
                w.write_record(row.iter().map(cell)).map_err(err)?;
            }
            w.flush().map_err(io)?;
        }
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("command".into(), report.command.into());
            obj.insert("seed".into(), seed.into());
            for (k, v) in &report.meta {
                obj.insert(k.clone(), v.clone());
            }
            let rows = report
                .rows
                .iter()
                .map(|r| Value::Object(report.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
                .collect();
            obj.insert("rows".into(), Value::Array(rows));
            if let Some(d) = &report.detail {
                obj.insert("detail".into(), d.clone());
            }
            serde_json::to_writer_pretty(&mut *out, &Value::Object(obj)).map_err(|e| invalid(e.to_string()))?;
            writeln!(out).map_err(io)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let mut r = Report::new("demo", &["x", "y"]);
        r.meta("note", "a,b");
        r.row(vec![num(0.1), json!("p,q")]);
        r.row(vec![num(f64::NAN), json!(true)]);
        r
    }

    #[test]
    fn csv_quotes_and_comments() {
        let mut buf = Vec::new();
        write(&sample(), Format::Csv, 7, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# fracdom demo seed=7\n# note=a,b\nx,y\n0.1,\"p,q\"\nnone,true\n"), "{text}");
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        assert_eq!(rdr.records().count(), 2);
    }

    #[test]
    fn json_rows_are_objects() {
        let mut buf = Vec::new();
        write(&sample(), Format::Json, 7, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["seed"], 7);
        assert_eq!(v["rows"][0]["y"], "p,q");
        assert_eq!(v["rows"][1]["x"], Value::Null);
    }
}
