//! CSV and JSON emission.

use std::fmt::Display;

use num_bigint::BigInt;
use perron_core::{Interval, MinPoly};
use serde_json::{json, Map, Number, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Decimal text as a JSON number, digits kept verbatim.
pub fn number(text: &str) -> Value {
    Value::Number(text.parse::<Number>().expect("decimal renderer emits JSON numbers"))
}

pub fn int(v: impl Display) -> Value {
    number(&v.to_string())
}

pub fn big(v: &BigInt) -> Value {
    int(v)
}

/// `{"lo": …, "hi": …}` with outward-rounded endpoints.
pub fn enclosure(x: &Interval) -> Value {
    json!({ "lo": number(&x.lo_decimal()), "hi": number(&x.hi_decimal()) })
}

pub fn polynomial(text: &str, mp: &MinPoly) -> Value {
    json!({
        "input": text,
        "normalized": mp.poly().to_string(),
        "coeffs": mp.poly().coeffs().iter().map(big).collect::<Vec<_>>(),
    })
}

/// The common head of every JSON report.
pub fn header(command: &str, text: &str, mp: &MinPoly) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("schema".into(), json!(1));
    map.insert("command".into(), json!(command));
    map.insert("polynomial".into(), polynomial(text, mp));
    map.insert("d".into(), json!(mp.degree()));
    map.insert("m".into(), json!(mp.floor_theta()));
    map
}

pub fn render_json(map: Map<String, Value>) -> String {
    let mut text = serde_json::to_string_pretty(&Value::Object(map)).expect("JSON values serialize");
    text.push('\n');
    text
}

/// A CSV table preceded by `# key: value` metadata lines.
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { meta: Vec::new(), header, rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl Display) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn standard_meta(&mut self, command: &str, text: &str, mp: &MinPoly) {
        self.meta("command", command);
        self.meta("polynomial", mp.poly());
        self.meta("input", text);
        self.meta("d", mp.degree());
        self.meta("m", mp.floor_theta());
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            writer.write_record(row).expect("in-memory write");
        }
        let bytes = writer.into_inner().expect("in-memory flush");
        out.push_str(&String::from_utf8(bytes).expect("CSV of UTF-8 fields"));
        out
    }
}
