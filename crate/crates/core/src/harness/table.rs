use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::evolution::StepRecord;
use crate::{Error, Result};

/// First line of every emitted data table.
pub const TABLE_FORMAT: &str = "projcool-table/1";
/// `format` key of every manifest.
pub const MANIFEST_FORMAT: &str = "projcool-manifest/1";
pub const TRAJECTORY_COLUMNS: [&str; 5] = ["step", "t", "overlap", "norm", "energy"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Missing,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Real)
    }
}

/// Comma-separated table with a format line and a header row. Reals use
/// the shortest representation that round-trips, so identical data gives
/// identical bytes.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Dimension { expected: self.columns.len(), found: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn from_records(records: &[StepRecord]) -> Self {
        let mut t = Table::new(&TRAJECTORY_COLUMNS);
        for r in records {
            t.rows.push(vec![r.step.into(), r.time.into(), r.overlap.into(), r.norm.into(), r.energy.into()]);
        }
        t
    }

    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn render(&self) -> String {
        let mut out = format!("# format: {TABLE_FORMAT}\n{}\n", self.columns.join(","));
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Int(v) => write!(out, "{v}").unwrap(),
                    Cell::Real(v) => write!(out, "{v:?}").unwrap(),
                    Cell::Missing => {}
                }
            }
            out.push('\n');
        }
        out
    }

    /// Parses a rendered table back, checking the format line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(l) if l == format!("# format: {TABLE_FORMAT}") => {}
            other => return Err(Error::domain(format!("unexpected table format line {other:?}"))),
        }
        let header = lines.next().ok_or_else(|| Error::domain("table has no header row"))?;
        let columns: Vec<String> = header.split(',').map(str::to_string).collect();
        let mut rows = Vec::new();
        for line in lines {
            let row = line
                .split(',')
                .map(|f| {
                    if f.is_empty() {
                        Ok(Cell::Missing)
                    } else if let Ok(i) = f.parse::<i64>() {
                        Ok(Cell::Int(i))
                    } else {
                        f.parse::<f64>().map(Cell::Real).map_err(|e| Error::domain(format!("bad cell {f:?}: {e}")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != columns.len() {
                return Err(Error::Dimension { expected: columns.len(), found: row.len() });
            }
            rows.push(row);
        }
        Ok(Table { columns, rows })
    }
}

/// Writes `bytes` to a sibling temporary file and renames it into place,
/// so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().ok_or_else(|| Error::config(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_parse_round_trip() {
        let mut t = Table::new(&["step", "x", "y"]);
        t.push(vec![0usize.into(), 0.1f64.into(), Cell::Missing]).unwrap();
        t.push(vec![1usize.into(), (1.0f64 / 3.0).into(), (-2.5e-17f64).into()]).unwrap();
        let text = t.render();
        assert!(text.starts_with("# format: projcool-table/1\nstep,x,y\n0,0.1,\n"));
        assert_eq!(Table::parse(&text).unwrap(), t);
    }

    #[test]
    fn wrong_width_rejected() {
        let mut t = Table::new(&["a", "b"]);
        assert!(t.push(vec![Cell::Int(1)]).is_err());
    }

    #[test]
    fn whole_reals_keep_decimal_point() {
        let mut t = Table::new(&["x"]);
        t.push(vec![1.0f64.into()]).unwrap();
        assert!(t.render().ends_with("\n1.0\n"));
    }
}
