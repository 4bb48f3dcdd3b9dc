use std::fmt;
use std::str::FromStr;

use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

/// Process exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// A mathematically meaningful negative outcome.
    Negative,
    InputError,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Negative => 1,
            Status::InputError => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Success => "ok",
            Status::Negative => "negative",
            Status::InputError => "error",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Rows for the CSV rendering; the JSON rendering carries the same data plus
/// whatever summary the command adds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub summary: Value,
    pub table: Table,
}

impl Report {
    pub fn error(command: &str, message: &str) -> Self {
        let mut table = Table::new(["error"]);
        table.push(vec![message.to_string()]);
        Report {
            command: command.to_string(),
            status: Status::InputError,
            summary: json!({ "error": message }),
            table,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut doc = json!({
                    "command": self.command,
                    "status": self.status.label(),
                    "summary": self.summary,
                });
                if !self.table.header.is_empty() {
                    let rows: Vec<Value> = self
                        .table
                        .rows
                        .iter()
                        .map(|r| {
                            Value::Object(
                                self.table
                                    .header
                                    .iter()
                                    .cloned()
                                    .zip(r.iter().map(|c| Value::String(c.clone())))
                                    .collect(),
                            )
                        })
                        .collect();
                    doc["rows"] = Value::Array(rows);
                }
                let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.table.header).expect("in-memory write");
                for r in &self.table.rows {
                    w.write_record(r).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
            }
        }
    }
}
