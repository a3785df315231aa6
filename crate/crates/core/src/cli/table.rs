//! Tabular output in CSV or JSON.

use crate::error::{Error, Result};
use crate::spectrum::write_file;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // Debug formatting is the shortest representation that reparses to the same bits
            Cell::Real(x) => format!("{x:?}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Real(x) => serde_json::to_string(x),
            Cell::Int(i) => serde_json::to_string(i),
            Cell::Text(s) => serde_json::to_string(s),
        }
        .expect("scalar serializes")
    }
}

/// Rows sharing one header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::invalid(format!(
                "row has {} cells, header has {}",
                row.len(),
                self.header.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let records: Vec<String> = self
            .rows
            .iter()
            .map(|row| {
                let fields: Vec<String> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(h, c)| format!("{}:{}", serde_json::to_string(h).expect("key serializes"), c.json()))
                    .collect();
                format!("{{{}}}", fields.join(","))
            })
            .collect();
        format!("[{}]\n", records.join(","))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Writes the table to `path`, or to stdout when no path is given.
pub fn emit_table(table: &Table, format: Format, path: Option<&Path>) -> Result<()> {
    let text = table.render(format);
    match path {
        Some(p) => write_file(p, &text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

/// One evaluation of a complex function at `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalRow {
    pub s_re: f64,
    pub s_im: f64,
    pub value_re: f64,
    pub value_im: f64,
    pub tail_bound: f64,
}

impl EvalRow {
    pub fn new(s: Complex64, value: Complex64, tail_bound: f64) -> Self {
        Self {
            s_re: s.re,
            s_im: s.im,
            value_re: value.re,
            value_im: value.im,
            tail_bound,
        }
    }

    pub fn s(&self) -> Complex64 {
        Complex64::new(self.s_re, self.s_im)
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }
}

pub const EVAL_HEADER: [&str; 5] = ["s_re", "s_im", "value_re", "value_im", "tail_bound"];

pub fn eval_table(rows: &[EvalRow]) -> Table {
    let mut t = Table::new(&EVAL_HEADER);
    for r in rows {
        t.rows.push(
            [r.s_re, r.s_im, r.value_re, r.value_im, r.tail_bound]
                .into_iter()
                .map(Cell::Real)
                .collect(),
        );
    }
    t
}

/// Reads rows written by [`eval_table`] in JSON form.
pub fn read_eval_rows(text: &str) -> Result<Vec<EvalRow>> {
    Ok(serde_json::from_str(text)?)
}
