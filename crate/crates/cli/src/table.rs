use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) if x.is_nan() => "nan".into(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Float(x) => Some(x),
            Cell::Int(i) => Some(i as f64),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

/// Rectangular table with unique column names and `#` metadata lines.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputTable {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
    metadata: Vec<(String, String)>,
}

impl OutputTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Result<Self, CliError> {
        let header: Vec<String> = header.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for h in &header {
            if !seen.insert(h.as_str()) {
                return Err(CliError::Config(format!("duplicate column {h}")));
            }
            if h.contains([',', '\n', '"']) {
                return Err(CliError::Config(format!("column name {h:?} is not CSV-safe")));
            }
        }
        Ok(Self {
            header,
            rows: Vec::new(),
            metadata: Vec::new(),
        })
    }

    pub fn push_row(&mut self, row: Vec<Cell>) -> Result<(), CliError> {
        if row.len() != self.header.len() {
            return Err(CliError::Numerical(format!(
                "row has {} cells, table has {} columns",
                row.len(),
                self.header.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn add_metadata(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.metadata.push((key.into(), value.into()));
    }

    /// Inserts entries ahead of the existing metadata.
    pub fn prepend_metadata(&mut self, entries: impl IntoIterator<Item = (String, String)>) {
        let mut meta: Vec<(String, String)> = entries.into_iter().collect();
        meta.append(&mut self.metadata);
        self.metadata = meta;
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        self.rows.iter().map(|r| r[idx].as_f64()).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            for line in v.lines() {
                let _ = writeln!(out, "# {k}: {line}");
            }
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| quote(&c.render())).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
