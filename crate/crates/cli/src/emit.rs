//! Plain, JSON and CSV rendering of command reports.

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, ValueEnum)]
pub enum Format {
    #[default]
    Plain,
    Json,
    Csv,
}

/// Rows of text cells under fixed column names.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// What a command produced. `json` and `table` carry the same content.
#[derive(Clone, PartialEq, Debug)]
pub struct Report {
    pub json: Value,
    pub table: Table,
    /// False when a verification verdict failed.
    pub success: bool,
}

impl Report {
    pub fn new(json: Value, table: Table) -> Self {
        Report {
            json,
            table,
            success: true,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Plain => render_plain(&self.table),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Csv => render_csv(&self.table),
        }
    }
}

/// Single-column tables print as bare lines; wider ones get a header and
/// left-aligned padded columns.
pub fn render_plain(table: &Table) -> String {
    let mut out = String::new();
    if table.columns.len() == 1 {
        for row in &table.rows {
            out.push_str(&row[0]);
            out.push('\n');
        }
        return out;
    }
    let width = |s: &str| s.chars().count();
    let mut widths: Vec<usize> = table.columns.iter().map(|c| width(c)).collect();
    for row in &table.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(width(cell));
        }
    }
    let mut line = |cells: &[String]| {
        let last = cells.len() - 1;
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            out.push_str(cell);
            if i < last {
                out.push_str(&" ".repeat(w - width(cell) + 2));
            }
        }
        out.push('\n');
    };
    line(&table.columns);
    for row in &table.rows {
        line(row);
    }
    out
}

pub fn render_csv(table: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.columns).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("cells are UTF-8")
}
