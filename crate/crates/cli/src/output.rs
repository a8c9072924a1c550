use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::Failure;

/// Creates `dir` and writes `name` into it.
pub fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::config(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// Comma-separated table with a header row.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Csv {
        let mut csv = Csv { text: String::new() };
        csv.row(header.iter().map(|h| h.to_string()));
        csv
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        let line: Vec<String> = cells.into_iter().map(|c| escape(&c)).collect();
        let _ = writeln!(self.text, "{}", line.join(","));
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Left-aligned `label  value` lines.
pub fn key_values(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    out
}

/// `field,value` CSV of the same rows.
pub fn key_values_csv(rows: &[(String, String)]) -> String {
    let mut csv = Csv::new(&["field", "value"]);
    for (k, v) in rows {
        csv.row([k.clone(), v.clone()]);
    }
    csv.finish()
}
