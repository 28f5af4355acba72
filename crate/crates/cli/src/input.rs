//! CSV ingestion with row-numbered diagnostics.

use std::fs::File;
use std::io::{self, Read};
use std::path::Path;

/// Parsed numeric table. `rows[i]` holds one value per expected column.
#[derive(Debug, Clone, PartialEq)]
pub struct InputTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl InputTable {
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }
}

pub fn open(path: Option<&Path>) -> Result<Box<dyn Read>, String> {
    match path {
        None => Ok(Box::new(io::stdin())),
        Some(p) if p.as_os_str() == "-" => Ok(Box::new(io::stdin())),
        Some(p) => File::open(p)
            .map(|f| Box::new(f) as Box<dyn Read>)
            .map_err(|e| format!("cannot read {}: {e}", p.display())),
    }
}

/// Reads a table whose header must name exactly `expected`, in order.
///
/// Rows are numbered from 1 after the header. The first column must be
/// strictly increasing with gaps of at least `min_separation`; for
/// `x,lo,hi` tables `lo ≤ hi` is enforced too.
pub fn read_table(
    reader: impl Read,
    expected: &[&str],
    min_separation: f64,
) -> Result<InputTable, String> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| format!("header: {e}"))?
        .iter()
        .map(str::to_owned)
        .collect::<Vec<_>>();
    if headers != expected {
        return Err(format!(
            "header: expected columns `{}`, found `{}`",
            expected.join(","),
            headers.join(",")
        ));
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (k, record) in rdr.records().enumerate() {
        let row_no = k + 1;
        let record = record.map_err(|e| format!("row {row_no}: {e}"))?;
        let mut values = Vec::with_capacity(expected.len());
        for (field, name) in record.iter().zip(expected) {
            let v: f64 = field
                .parse()
                .map_err(|_| format!("row {row_no}: column `{name}` is not a number: `{field}`"))?;
            if !v.is_finite() {
                return Err(format!("row {row_no}: column `{name}` is not finite"));
            }
            values.push(v);
        }
        if let Some(prev) = rows.last() {
            if !(values[0] - prev[0] >= min_separation && values[0] > prev[0]) {
                return Err(format!(
                    "row {row_no}: x = {} does not exceed the previous x = {} by at least {min_separation:e}",
                    values[0], prev[0]
                ));
            }
        }
        if expected == ["x", "lo", "hi"] && values[1] > values[2] {
            return Err(format!(
                "row {row_no}: lo = {} exceeds hi = {}",
                values[1], values[2]
            ));
        }
        rows.push(values);
    }
    Ok(InputTable {
        columns: headers,
        rows,
    })
}
