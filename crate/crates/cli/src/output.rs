use clap::ValueEnum;
use serde_json::Value;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// One command's result in every format it supports.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub csv: Option<String>,
}

impl Report {
    pub fn new(text: String, json: Value) -> Self {
        Report { text, json, csv: None }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn render(&self, format: Format) -> Result<String, Failure> {
        match format {
            Format::Text => Ok(self.text.clone()),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.csv.clone().ok_or_else(|| Failure::Usage("this command has no csv output".into())),
        }
    }
}

/// Right-aligned table with a header row.
pub fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let width: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).chain([header[c].chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&width).map(|(s, &w)| format!("{s:>w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    for r in rows {
        out.push_str(&line(r));
    }
    out
}
