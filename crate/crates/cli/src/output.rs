use std::fmt;

use num_bigint::BigUint;
use serde_json::Value;

/// Exact integer as a JSON number, however large.
pub fn big(v: &BigUint) -> Value {
    serde_json::from_str(&v.to_string()).expect("decimal digits are a JSON number")
}

/// Right-aligned columns under a header, or plain lines.
pub struct Table {
    header: Option<Vec<String>>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<const N: usize>(header: [&str; N]) -> Self {
        Table { header: Some(header.iter().map(|s| s.to_string()).collect()), rows: Vec::new() }
    }

    pub fn lines() -> Self {
        Table { header: None, rows: Vec::new() }
    }

    pub fn row<const N: usize>(&mut self, cells: [String; N]) {
        self.rows.push(cells.to_vec());
    }

    pub fn line(&mut self, s: String) {
        self.rows.push(vec![s]);
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(header) = &self.header else {
            for r in &self.rows {
                writeln!(f, "{}", r[0])?;
            }
            return Ok(());
        };
        let mut widths: Vec<usize> = header.iter().map(String::len).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.len());
            }
        }
        for r in std::iter::once(header).chain(&self.rows) {
            let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            writeln!(f, "{}", cells.join("  "))?;
        }
        Ok(())
    }
}
