use std::io::Write;
use std::path::Path;

use crate::{Error, Result};

use super::config::ExperimentConfig;

/// Rows of formatted cells under fixed column names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|&c| c == name)
    }

    /// Numeric values of one column; empty cells are `None`.
    pub fn values(&self, name: &str) -> Result<Vec<Option<f64>>> {
        let i = self
            .column_index(name)
            .ok_or_else(|| Error::Shape(format!("no column named {name:?}")))?;
        self.rows
            .iter()
            .map(|r| {
                let cell = &r[i];
                if cell.is_empty() {
                    Ok(None)
                } else {
                    cell.parse::<f64>().map(Some).map_err(|_| {
                        Error::Shape(format!("column {name:?}: {cell:?} is not a number"))
                    })
                }
            })
            .collect()
    }

    /// Raw cells of one column.
    pub fn cells(&self, name: &str) -> Result<Vec<&str>> {
        let i = self
            .column_index(name)
            .ok_or_else(|| Error::Shape(format!("no column named {name:?}")))?;
        Ok(self.rows.iter().map(|r| r[i].as_str()).collect())
    }

    fn body(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

/// Parsed body of a CSV written by [`render_csv`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvData {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvData {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Shape("CSV has no header row".into()))?;
        let columns: Vec<String> = header.split(',').map(str::to_string).collect();
        let rows = lines
            .map(|l| {
                let row: Vec<String> = l.split(',').map(str::to_string).collect();
                if row.len() == columns.len() {
                    Ok(row)
                } else {
                    Err(Error::Shape(format!(
                        "CSV row {l:?} has {} cells, expected {}",
                        row.len(),
                        columns.len()
                    )))
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self { columns, rows })
    }

    pub fn column(&self, name: &str) -> Result<Vec<&str>> {
        let i = self
            .columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Shape(format!("no column named {name:?}")))?;
        Ok(self.rows.iter().map(|r| r[i].as_str()).collect())
    }
}

/// Shortest round-trip scientific notation; empty for NaN.
pub(crate) fn sci(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:e}")
    }
}

pub(crate) fn opt_sci(x: Option<f64>) -> String {
    x.map_or_else(String::new, sci)
}

/// The complete output file: version line, config block, header, rows.
pub fn render_csv(cfg: &ExperimentConfig, table: &Table) -> String {
    format!(
        "# jitterchan {}\n{}{}",
        env!("CARGO_PKG_VERSION"),
        cfg.comment_block(),
        table.body()
    )
}

/// Writes `contents` through a temporary file in the target directory, so
/// `path` either keeps its old contents or holds the complete new file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| Error::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}
