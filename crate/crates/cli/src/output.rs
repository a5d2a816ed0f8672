use serde_json::{Map, Value};

use crate::commands::Output;
use crate::Format;

pub enum Rendered {
    Text(String),
    Failed(String),
}

pub fn render(out: &Output, metadata: Value, format: Format) -> Rendered {
    match format {
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("metadata".into(), metadata);
            doc.insert("result".into(), out.result.clone());
            match serde_json::to_string_pretty(&Value::Object(doc)) {
                Ok(s) => Rendered::Text(s + "\n"),
                Err(e) => Rendered::Failed(e.to_string()),
            }
        }
        Format::Csv => {
            let Some(t) = &out.table else { return Rendered::Failed("no tabular output".into()) };
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut write = || -> csv::Result<()> {
                w.write_record(&t.header)?;
                for r in &t.rows {
                    w.write_record(r)?;
                }
                w.flush()?;
                Ok(())
            };
            if let Err(e) = write() {
                return Rendered::Failed(e.to_string());
            }
            match w.into_inner() {
                Ok(bytes) => Rendered::Text(String::from_utf8_lossy(&bytes).into_owned()),
                Err(e) => Rendered::Failed(e.to_string()),
            }
        }
        Format::Plain => {
            let mut s = String::new();
            flatten("metadata", &metadata, &mut s);
            flatten("result", &out.result, &mut s);
            Rendered::Text(s)
        }
    }
}

/// One `path: value` line per scalar.
fn flatten(path: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&format!("{}.{}", path, k), x, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{}[{}]", path, i), x, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{}: {}\n", path, s)),
        other => out.push_str(&format!("{}: {}\n", path, other)),
    }
}
