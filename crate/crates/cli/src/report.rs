//! Command reports and their text, CSV and JSON renderings.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Number, Value as Json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Num(f64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as i64)
    }
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::Int(x as i64)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<String> for Value {
    fn from(x: String) -> Self {
        Value::Text(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.to_string())
    }
}

/// Twelve significant digits in scientific notation, as used in JSON output.
pub fn sci12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Short human form: the value rounded to twelve significant digits.
pub fn short(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let r: f64 = sci12(x).parse().expect("formatted float parses");
    if r == 0.0 {
        "0".into()
    } else if r.abs() < 1e-4 || r.abs() >= 1e9 {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

impl Value {
    fn text(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Num(x) => short(*x),
            Value::Text(s) => s.clone(),
            Value::Bool(b) => if *b { "yes" } else { "no" }.into(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Int(i) => Json::from(*i),
            Value::Num(x) if x.is_finite() => Json::Number(sci12(*x).parse::<Number>().expect("valid JSON number")),
            Value::Num(_) => Json::Null,
            Value::Text(s) => Json::from(s.as_str()),
            Value::Bool(b) => Json::from(*b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Block {
    Fields(Vec<(String, Value)>),
    Table { columns: Vec<String>, rows: Vec<Vec<Value>> },
    Lines(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub heading: String,
    pub block: Block,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub title: String,
    pub sections: Vec<Section>,
    pub verdict: String,
    pub exit_code: u8,
}

impl Report {
    pub fn new(command: &str, title: &str) -> Self {
        Self { command: command.into(), title: title.into(), sections: Vec::new(), verdict: String::new(), exit_code: 0 }
    }

    pub fn fields(&mut self, heading: &str, rows: Vec<(&str, Value)>) {
        let rows = rows.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        self.sections.push(Section { heading: heading.into(), block: Block::Fields(rows) });
    }

    pub fn table(&mut self, heading: &str, columns: Vec<String>, rows: Vec<Vec<Value>>) {
        self.sections.push(Section { heading: heading.into(), block: Block::Table { columns, rows } });
    }

    pub fn lines(&mut self, heading: &str, lines: Vec<String>) {
        self.sections.push(Section { heading: heading.into(), block: Block::Lines(lines) });
    }

    pub fn verdict(&mut self, verdict: impl Into<String>, exit_code: u8) {
        self.verdict = verdict.into();
        self.exit_code = exit_code;
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}: {}", self.command, self.title).unwrap();
        for s in &self.sections {
            writeln!(out, "\n[{}]", s.heading).unwrap();
            match &s.block {
                Block::Fields(rows) => {
                    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
                    for (k, v) in rows {
                        writeln!(out, "  {}  {}", pad(k, width), v.text()).unwrap();
                    }
                }
                Block::Table { columns, rows } => {
                    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(Value::text).collect()).collect();
                    let widths: Vec<usize> = (0..columns.len())
                        .map(|c| {
                            cells
                                .iter()
                                .filter_map(|r| r.get(c))
                                .chain(std::iter::once(&columns[c]))
                                .map(|x| x.chars().count())
                                .max()
                                .unwrap_or(0)
                        })
                        .collect();
                    let line = |r: &[String]| {
                        let padded: Vec<String> = r.iter().zip(&widths).map(|(x, &w)| pad(x, w)).collect();
                        format!("  {}", padded.join("  ").trim_end())
                    };
                    writeln!(out, "{}", line(columns)).unwrap();
                    for r in &cells {
                        writeln!(out, "{}", line(r)).unwrap();
                    }
                }
                Block::Lines(lines) => {
                    for l in lines {
                        writeln!(out, "  {l}").unwrap();
                    }
                }
            }
        }
        writeln!(out, "\nverdict: {}", self.verdict).unwrap();
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        let mut rec = |fields: Vec<String>| w.write_record(&fields).expect("writing to memory");
        rec(vec!["command".into(), self.command.clone()]);
        for s in &self.sections {
            match &s.block {
                Block::Fields(rows) => {
                    for (k, v) in rows {
                        rec(vec![s.heading.clone(), k.clone(), v.text()]);
                    }
                }
                Block::Table { columns, rows } => {
                    rec(std::iter::once(s.heading.clone()).chain(columns.iter().cloned()).collect());
                    for r in rows {
                        rec(std::iter::once(s.heading.clone()).chain(r.iter().map(Value::text)).collect());
                    }
                }
                Block::Lines(lines) => {
                    for l in lines {
                        rec(vec![s.heading.clone(), l.clone()]);
                    }
                }
            }
        }
        rec(vec!["verdict".into(), self.verdict.clone()]);
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("CSV of UTF-8 strings")
    }

    pub fn to_json(&self) -> String {
        let mut root = Map::new();
        root.insert("command".into(), Json::from(self.command.as_str()));
        root.insert("title".into(), Json::from(self.title.as_str()));
        let sections: Vec<Json> = self
            .sections
            .iter()
            .map(|s| {
                let mut obj = Map::new();
                obj.insert("heading".into(), Json::from(s.heading.as_str()));
                match &s.block {
                    Block::Fields(rows) => {
                        let fields: Map<String, Json> = rows.iter().map(|(k, v)| (k.clone(), v.json())).collect();
                        obj.insert("fields".into(), Json::Object(fields));
                    }
                    Block::Table { columns, rows } => {
                        obj.insert("columns".into(), Json::from(columns.clone()));
                        let rows: Vec<Json> =
                            rows.iter().map(|r| Json::Array(r.iter().map(Value::json).collect())).collect();
                        obj.insert("rows".into(), Json::Array(rows));
                    }
                    Block::Lines(lines) => {
                        obj.insert("lines".into(), Json::from(lines.clone()));
                    }
                }
                Json::Object(obj)
            })
            .collect();
        root.insert("sections".into(), Json::Array(sections));
        root.insert("verdict".into(), Json::from(self.verdict.as_str()));
        root.insert("exit_code".into(), Json::from(self.exit_code));
        let mut s = serde_json::to_string_pretty(&Json::Object(root)).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

fn pad(s: &str, width: usize) -> String {
    let n = s.chars().count();
    format!("{s}{}", " ".repeat(width.saturating_sub(n)))
}
