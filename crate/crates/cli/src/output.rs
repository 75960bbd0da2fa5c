//! CSV and JSON emitters.

use serde::Serialize;

use crate::config::Format;
use crate::error::Result;

/// Rows as CSV with a header line, preceded by `# `-prefixed notes.
pub fn csv_bytes<T: Serialize>(rows: &[T], notes: &[&str]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    for note in notes {
        buf.extend_from_slice(format!("# {note}\n").as_bytes());
    }
    let mut w = csv::Writer::from_writer(buf);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

/// `{"command": ..., "rows": [...]}`, pretty-printed with a trailing newline.
pub fn json_table<T: Serialize>(command: &str, rows: &[T], notes: &[&str]) -> Result<Vec<u8>> {
    let value = serde_json::json!({ "command": command, "notes": notes, "rows": rows });
    json_bytes(&value)
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut buf = serde_json::to_vec_pretty(value)?;
    buf.push(b'\n');
    Ok(buf)
}

pub fn table<T: Serialize>(command: &str, rows: &[T], format: Format, notes: &[&str]) -> Result<Vec<u8>> {
    match format {
        Format::Csv => csv_bytes(rows, notes),
        Format::Json => json_table(command, rows, notes),
    }
}
