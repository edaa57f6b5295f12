//! Headered CSV matrix files: a `# rows=<r> cols=<c>` line followed by `r`
//! comma-separated rows.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{RecoveryError, Result};

pub fn format_matrix(a: &DMatrix<f64>) -> String {
    let mut out = format!("# rows={} cols={}\n", a.nrows(), a.ncols());
    for row in a.row_iter() {
        let mut first = true;
        for v in row.iter() {
            if !first {
                out.push(',');
            }
            first = false;
            // `{:?}` keeps the shortest representation that round-trips.
            write!(out, "{v:?}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>> {
    let bad = |msg: String| RecoveryError::Parse(msg);
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let (rows, cols) = parse_header(header).ok_or_else(|| bad(format!("bad header `{header}`")))?;
    let mut data = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for line in lines {
        seen += 1;
        if seen > rows {
            return Err(bad(format!("more than {rows} data rows")));
        }
        let before = data.len();
        for field in line.split(',') {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| bad(format!("row {seen}: cannot parse `{}`", field.trim())))?;
            data.push(v);
        }
        if data.len() - before != cols {
            return Err(bad(format!("row {seen} has {} fields, expected {cols}", data.len() - before)));
        }
    }
    if seen != rows {
        return Err(bad(format!("expected {rows} data rows, found {seen}")));
    }
    Ok(DMatrix::from_row_slice(rows, cols, &data))
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let rest = line.trim().strip_prefix('#')?;
    let mut rows = None;
    let mut cols = None;
    for part in rest.split_whitespace() {
        let (key, value) = part.split_once('=')?;
        match key {
            "rows" => rows = Some(value.parse().ok()?),
            "cols" => cols = Some(value.parse().ok()?),
            _ => return None,
        }
    }
    Some((rows?, cols?))
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<DMatrix<f64>> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(path: impl AsRef<Path>, a: &DMatrix<f64>) -> Result<()> {
    std::fs::write(path, format_matrix(a))?;
    Ok(())
}
