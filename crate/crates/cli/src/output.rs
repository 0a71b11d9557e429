//! CSV and JSON writers. Output is deterministic: fixed column order, fixed
//! field order and shortest round-trip formatting of floats.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

const STAGE: &str = "writing output";

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::io(STAGE, format!("cannot create {}: {e}", dir.display())))
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::io(STAGE, e))?;
    text.push('\n');
    std::fs::write(&path, text)
        .map_err(|e| CliError::io(STAGE, format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

/// Writes a header and rows of already formatted cells.
pub fn write_csv(
    dir: &Path,
    name: &str,
    header: &[String],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let mut w = csv::Writer::from_path(&path)
        .map_err(|e| CliError::io(STAGE, format!("cannot write {}: {e}", path.display())))?;
    w.write_record(header).map_err(|e| CliError::io(STAGE, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| CliError::io(STAGE, e))?;
    }
    w.flush().map_err(|e| CliError::io(STAGE, e))?;
    Ok(path)
}

/// Shortest round-trip text; exponent notation for very small or large values.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn opt_usize(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_cells() {
        assert_eq!(num(0.5), "0.5");
        assert_eq!(num(1e-20), "1e-20");
        assert_eq!(num(-2.5e-7), "-2.5e-7");
        assert_eq!(num(1234.0), "1234");
        assert_eq!(opt_num(None), "");
        assert_eq!(opt_usize(Some(3)), "3");
        // Round trip.
        let x = 0.1 + 0.2;
        assert_eq!(num(x).parse::<f64>().unwrap(), x);
    }
}
