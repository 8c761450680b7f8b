//! Best-known minimum distances, read from `q,n,k,d` CSV files.

use std::path::Path;

use galhull_core::quantum::ReferenceTable;
use serde::Deserialize;

use crate::error::AppError;

pub const BUNDLED: &str = include_str!("../data/reference/bounds.csv");

#[derive(Deserialize)]
struct Entry {
    q: u32,
    n: usize,
    k: usize,
    d: usize,
}

pub fn parse(text: &str, origin: &str) -> Result<ReferenceTable, AppError> {
    let mut table = ReferenceTable::new();
    let mut errors = Vec::new();
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    for (i, rec) in reader.deserialize::<Entry>().enumerate() {
        match rec {
            Ok(e) if e.k == 0 || e.k > e.n || e.d == 0 || e.d > e.n - e.k + 1 => {
                errors.push(format!("{origin}: record {}: [{},{},{}] violates the Singleton bound", i + 1, e.n, e.k, e.d))
            }
            Ok(e) => match table.get(e.q, e.n, e.k) {
                Some(d) if d != e.d => {
                    errors.push(format!("{origin}: record {}: conflicting distances {d} and {}", i + 1, e.d))
                }
                _ => table.insert(e.q, e.n, e.k, e.d),
            },
            Err(e) => errors.push(format!("{origin}: {e}")),
        }
    }
    if errors.is_empty() {
        Ok(table)
    } else {
        Err(AppError::Config(errors))
    }
}

pub fn load(path: &Path) -> Result<ReferenceTable, AppError> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::Io(format!("{}: {e}", path.display())))?;
    parse(&text, &path.display().to_string())
}

pub fn bundled() -> ReferenceTable {
    parse(BUNDLED, "bundled table").expect("bundled reference table is well formed")
}
