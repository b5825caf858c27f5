//! Tabular reports with per-column provenance, rendered as aligned text,
//! CSV or JSON lines.

use std::fmt::Write;
use std::str::FromStr;

use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Produced by running the simulator.
    Measured,
    /// Copied from the publication.
    Published,
    /// Arithmetic over measured and/or published values.
    Derived,
    /// Row labels and flags.
    Label,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::Measured => "measured-in-simulation",
            Provenance::Published => "paper-constant",
            Provenance::Derived => "derived",
            Provenance::Label => "label",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: &'static str,
    pub provenance: Provenance,
}

pub const fn col(name: &'static str, provenance: Provenance) -> Column {
    Column { name, provenance }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    /// Value and decimals shown.
    Float(f64, usize),
    Text(String),
    Bool(bool),
    Missing,
}

impl Cell {
    pub fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v, d) => format!("{v:.d$}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => if *b { "yes" } else { "no" }.into(),
            Cell::Missing => "n/a".into(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v, d) => {
                let p = 10f64.powi(*d as i32);
                json!((v * p).round() / p)
            }
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Missing => Value::Null,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Csv,
    JsonLines,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json-lines" | "jsonl" => Ok(Format::JsonLines),
            _ => Err(format!("unknown format `{s}` (table, csv, json-lines)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub title: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>, columns: Vec<Column>) -> Self {
        Report { title: title.into(), columns, rows: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn cell(&self, row: usize, name: &str) -> &Cell {
        &self.rows[row][self.column(name).expect("known column")]
    }

    /// Provenance banner: which columns carry which kind of value.
    pub fn banner(&self) -> Vec<String> {
        [Provenance::Measured, Provenance::Published, Provenance::Derived]
            .iter()
            .filter_map(|&p| {
                let names: Vec<&str> =
                    self.columns.iter().filter(|c| c.provenance == p).map(|c| c.name).collect();
                (!names.is_empty()).then(|| format!("[{}] {}", p.tag(), names.join(", ")))
            })
            .collect()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Csv => self.render_csv(),
            Format::JsonLines => self.render_json_lines(),
        }
    }

    fn render_table(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.name.len()]).max().unwrap())
            .collect();
        let mut out = format!("== {} ==\n", self.title);
        for b in self.banner() {
            writeln!(out, "{b}").unwrap();
        }
        let line = |vals: Vec<&str>| {
            vals.iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (v, w))| if i == 0 { format!("{v:<w$}") } else { format!("{v:>w$}") })
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        writeln!(out, "{}", line(self.columns.iter().map(|c| c.name).collect())).unwrap();
        for r in &cells {
            writeln!(out, "{}", line(r.iter().map(String::as_str).collect())).unwrap();
        }
        for n in &self.notes {
            writeln!(out, "note: {n}").unwrap();
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        for b in self.banner() {
            writeln!(out, "# {b}").unwrap();
        }
        let names: Vec<&str> = self.columns.iter().map(|c| c.name).collect();
        writeln!(out, "{}", names.join(",")).unwrap();
        for r in &self.rows {
            let vals: Vec<String> = r
                .iter()
                .map(|c| {
                    let t = c.text();
                    if t.contains([',', '"']) {
                        format!("\"{}\"", t.replace('"', "\"\""))
                    } else {
                        t
                    }
                })
                .collect();
            writeln!(out, "{}", vals.join(",")).unwrap();
        }
        for n in &self.notes {
            writeln!(out, "# note: {n}").unwrap();
        }
        out
    }

    fn render_json_lines(&self) -> String {
        let provenance: Map<String, Value> =
            self.columns.iter().map(|c| (c.name.to_string(), json!(c.provenance.tag()))).collect();
        let mut out = String::new();
        let header = json!({ "report": self.title, "provenance": provenance, "notes": self.notes });
        writeln!(out, "{header}").unwrap();
        for r in &self.rows {
            let obj: Map<String, Value> =
                self.columns.iter().zip(r).map(|(c, v)| (c.name.to_string(), v.json())).collect();
            writeln!(out, "{}", Value::Object(obj)).unwrap();
        }
        out
    }
}
