//! Report envelope and its JSON/CSV renderings.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// One command's output. Keys serialize in declaration order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub rows: Vec<Value>,
    pub tool_version: String,
    /// RFC 3339, UTC.
    pub timestamp: String,
}

impl ReportEnvelope {
    pub fn new(command: &str, parameters: Map<String, Value>, rows: Vec<Value>) -> Self {
        Self {
            command: command.to_owned(),
            parameters,
            rows,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("envelope serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Rows as CSV with a header taken from the first row's keys.
    pub fn to_csv(&self) -> csv::Result<String> {
        let mut out = Vec::new();
        {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut out);
            if let Some(Value::Object(first)) = self.rows.first() {
                let header: Vec<&str> = first.keys().map(String::as_str).collect();
                w.write_record(&header)?;
                for row in &self.rows {
                    let record: Vec<String> = header
                        .iter()
                        .map(|k| row.get(*k).map(csv_cell).unwrap_or_default())
                        .collect();
                    w.write_record(&record)?;
                }
            }
            w.flush()?;
        }
        Ok(String::from_utf8(out).expect("csv output is UTF-8"))
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn render(env: &ReportEnvelope, format: Format) -> std::io::Result<String> {
    match format {
        Format::Json => Ok(env.to_json()),
        Format::Csv => env.to_csv().map_err(std::io::Error::other),
    }
}

pub fn write_report(text: &str, out: Option<&std::path::Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> ReportEnvelope {
        let mut p = Map::new();
        p.insert("n".into(), json!(2));
        ReportEnvelope::new(
            "demo",
            p,
            vec![
                json!({"n": 0, "value": "1/3", "ok": true, "x": 0.1}),
                json!({"n": 1, "value": "-7", "ok": false, "x": f64::INFINITY}),
            ],
        )
    }

    #[test]
    fn json_round_trip_and_key_order() {
        let env = sample();
        let text = env.to_json();
        assert_eq!(ReportEnvelope::from_json(&text).unwrap(), env);
        let pos = |k: &str| text.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("command") < pos("parameters"));
        assert!(pos("parameters") < pos("rows"));
        assert!(pos("rows") < pos("tool_version"));
        assert!(pos("tool_version") < pos("timestamp"));
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv().unwrap();
        assert_eq!(csv, "n,value,ok,x\n0,1/3,true,0.1\n1,-7,false,\n");
    }
}
