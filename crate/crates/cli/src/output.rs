//! CSV / JSON rendering. Everything is rendered in memory and written in one
//! go, so a failing command never leaves a partial file behind.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::Format;
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a, T> {
    schema: u32,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    passed: Option<bool>,
    rows: &'a [T],
}

pub fn render<T: Serialize>(
    command: &str,
    rows: &[T],
    format: Format,
    passed: Option<bool>,
) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => {
            let mut buf = format!("# schema={SCHEMA_VERSION}\n").into_bytes();
            let mut w = csv::Writer::from_writer(&mut buf);
            for row in rows {
                w.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
            }
            w.flush().map_err(|e| CliError::Io(e.to_string()))?;
            drop(w);
            Ok(buf)
        }
        Format::Json => {
            let env = Envelope {
                schema: SCHEMA_VERSION,
                command,
                passed,
                rows,
            };
            let mut buf = serde_json::to_vec_pretty(&env).map_err(|e| CliError::Io(e.to_string()))?;
            buf.push(b'\n');
            Ok(buf)
        }
    }
}

pub fn write(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|e| CliError::Io(e.to_string())),
    }
}
