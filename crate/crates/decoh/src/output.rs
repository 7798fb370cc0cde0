//! CSV and JSON writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::RunError;

/// Plain decimal in `[1e−4, 1e15)`, scientific notation otherwise; both
/// round-trip exactly.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Header row plus records, RFC 4180 quoting.
pub struct CsvTable {
    path: PathBuf,
    writer: csv::Writer<BufWriter<File>>,
}

impl CsvTable {
    pub fn create(path: &Path, header: &[&str]) -> Result<Self, RunError> {
        let file = File::create(path).map_err(|e| RunError::io(path, e))?;
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(BufWriter::new(file));
        writer.write_record(header).map_err(|e| csv_error(path, e))?;
        Ok(CsvTable { path: path.to_path_buf(), writer })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<(), RunError> {
        self.writer.write_record(fields).map_err(|e| csv_error(&self.path, e))
    }

    pub fn finish(mut self) -> Result<PathBuf, RunError> {
        self.writer.flush().map_err(|e| RunError::io(&self.path, e))?;
        Ok(self.path)
    }
}

fn csv_error(path: &Path, e: csv::Error) -> RunError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => RunError::io(path, io),
        other => RunError::Other(format!("{}: {other:?}", path.display())),
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<PathBuf, RunError> {
    let file = File::create(path).map_err(|e| RunError::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| RunError::Other(e.to_string()))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| RunError::io(path, e))?;
    Ok(path.to_path_buf())
}
