//! CSV tables with a mandatory header and full-precision floats.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
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

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
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

/// 17 significant digits; round-trips every finite `f64`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n', '\r']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Panics if the row width differs from the header.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }
}

pub fn emit_table<W: Write>(table: &Table, mut out: W) -> io::Result<()> {
    if table.header.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "table has no header"));
    }
    let header: Vec<String> = table.header.iter().map(|h| Cell::Text(h.clone()).render()).collect();
    out.write_all(header.join(",").as_bytes())?;
    out.write_all(b"\n")?;
    for (i, row) in table.rows.iter().enumerate() {
        if row.len() != table.header.len() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                format!("row {i} has {} cells, header has {}", row.len(), table.header.len()),
            ));
        }
        let cells: Vec<String> = row.iter().map(Cell::render).collect();
        out.write_all(cells.join(",").as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn write_table(table: &Table, path: &Path) -> Result<()> {
    let wrap = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(wrap)?;
    emit_table(table, BufWriter::new(file)).map_err(wrap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only() {
        let t = Table::new(["t", "value"]);
        let mut buf = Vec::new();
        emit_table(&t, &mut buf).unwrap();
        assert_eq!(buf, b"t,value\n");
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, f64::MAX, f64::MIN_POSITIVE, 0.0] {
            assert_eq!(format_float(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn quoting() {
        let mut t = Table::new(["name"]);
        t.push(vec![Cell::from("a,\"b\"")]);
        let mut buf = Vec::new();
        emit_table(&t, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "name\n\"a,\"\"b\"\"\"\n");
    }

    #[test]
    fn missing_header() {
        assert!(emit_table(&Table::default(), Vec::new()).is_err());
    }

    #[test]
    fn io_error_names_path() {
        let p = Path::new("/nonexistent-dir/x.csv");
        match write_table(&Table::new(["a"]), p) {
            Err(Error::Io { path, .. }) => assert_eq!(path, p),
            other => panic!("{other:?}"),
        }
    }
}
