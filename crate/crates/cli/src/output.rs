//! CSV tables and the run manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context;

/// Bumped whenever a column layout changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits, enough to round-trip any double.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => {
                if s.contains([',', '"', '\n']) {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
        }
    }
}

/// One output file: a named table with a fixed header.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self::with_columns(name, columns.iter().map(|c| c.to_string()).collect())
    }

    pub fn with_columns(name: impl Into<String>, columns: Vec<String>) -> Self {
        Self { name: name.into(), columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width in {}", self.name);
        self.rows.push(row);
    }

    pub fn to_csv(&self, experiment: &str) -> String {
        let mut s = format!("# locinf-csv v{SCHEMA_VERSION} experiment={experiment} table={}\n", self.name);
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn write(&self, dir: &Path, experiment: &str) -> anyhow::Result<PathBuf> {
        let path = dir.join(format!("{}.csv", self.name));
        std::fs::write(&path, self.to_csv(experiment)).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

/// Everything about a run that is not data: kept apart so that data files
/// stay byte-identical between runs.
pub struct Manifest<'a> {
    pub experiment: &'a str,
    pub seed: u64,
    pub threads: usize,
    pub paper_scale: bool,
    pub replicates: Option<usize>,
    pub started_unix: u64,
    pub wall_seconds: f64,
    pub files: Vec<String>,
    pub resolved_params: String,
    pub config_source: &'a str,
}

impl Manifest<'_> {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment = {:?}", self.experiment);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "threads = {}", self.threads);
        let _ = writeln!(s, "paper_scale = {}", self.paper_scale);
        if let Some(r) = self.replicates {
            let _ = writeln!(s, "replicates = {r}");
        }
        let _ = writeln!(s, "locinf_version = {:?}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "csv_schema = {SCHEMA_VERSION}");
        let _ = writeln!(s, "started_unix = {}", self.started_unix);
        let _ = writeln!(s, "wall_seconds = {:.3}", self.wall_seconds);
        let files: Vec<String> = self.files.iter().map(|f| format!("{f:?}")).collect();
        let _ = writeln!(s, "files = [{}]", files.join(", "));
        let _ = writeln!(s, "config = '''\n{}'''", self.config_source.replace("'''", "' ' '"));
        let _ = writeln!(s, "\n[params]\n{}", self.resolved_params);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-300, -2.5e17, std::f64::consts::PI] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", &["a", "b", "c"]);
        t.push(vec![1usize.into(), 0.25.into(), "x,y".into()]);
        let csv = t.to_csv("ex3_gaps");
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# locinf-csv v1 "));
        assert_eq!(lines[1], "a,b,c");
        assert_eq!(lines[2], "1,2.5000000000000000e-1,\"x,y\"");
        assert!(!csv.contains('\r'));
    }
}
