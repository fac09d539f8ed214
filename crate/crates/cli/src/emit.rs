//! Record output: one JSON object per line, or tab-separated `key=value`
//! fields with polynomials printed in the usual notation.

use std::io::{self, Write};

use clap::ValueEnum;
use necklace_core::exactmath::Poly;
use serde_json::Value;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

pub struct Emitter {
    format: Format,
    out: Box<dyn Write>,
}

impl Emitter {
    pub fn stdout(format: Format) -> Self {
        Emitter {
            format,
            out: Box::new(io::stdout().lock()),
        }
    }

    /// Writes one record and flushes, so long scans show progress.
    pub fn emit(&mut self, record: &Value) -> io::Result<()> {
        match self.format {
            Format::Json => writeln!(self.out, "{record}")?,
            Format::Table => writeln!(self.out, "{}", table_line(record))?,
        }
        self.out.flush()
    }
}

fn table_line(record: &Value) -> String {
    match record {
        Value::Object(fields) => fields
            .iter()
            .map(|(k, v)| format!("{k}={}", render(v)))
            .collect::<Vec<_>>()
            .join("\t"),
        other => render(other),
    }
}

fn render(v: &Value) -> String {
    if let Some(p) = as_poly(v) {
        return p.to_string();
    }
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!(
            "[{}]",
            items.iter().map(render).collect::<Vec<_>>().join(", ")
        ),
        Value::Object(fields) => format!(
            "{{{}}}",
            fields
                .iter()
                .map(|(k, v)| format!("{k}: {}", render(v)))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        other => other.to_string(),
    }
}

fn as_poly(v: &Value) -> Option<Poly> {
    match v {
        Value::Object(fields) if fields.len() == 1 && fields.contains_key("terms") => {
            serde_json::from_value(v.clone()).ok()
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn table_rendering() {
        let rec = json!({"d": 2, "s": {"terms": [[1, "-1"], [2, "1"]]}, "ms": [1, 2]});
        assert_eq!(table_line(&rec), "d=2\tms=[1, 2]\ts=x^2 - x");
    }
}
