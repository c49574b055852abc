//! Output sinks, CSV/JSON helpers, and provenance.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::Settings;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        match s.str("format").unwrap_or("csv") {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!("format must be csv or json, got `{other}`"))),
        }
    }
}

/// `--out` file or stdout.
pub fn open_output(s: &Settings) -> Result<Box<dyn Write>, CliError> {
    match s.str("out") {
        Some(path) => {
            let file = File::create(Path::new(path))
                .map_err(|e| CliError::Config(format!("cannot create {path}: {e}")))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Fields shared by every JSON document.
pub fn provenance(command: &str, settings: &Settings, material_sha256: Option<&str>) -> Map<String, Value> {
    let mut doc = Map::new();
    doc.insert("command".into(), json!(command));
    doc.insert("version".into(), json!(thermal_decoherence::VERSION));
    doc.insert("config".into(), json!(settings.entries()));
    if let Some(hash) = material_sha256 {
        doc.insert("material_sha256".into(), json!(hash));
    }
    doc
}

pub fn write_json(out: &mut dyn Write, mut doc: Map<String, Value>, warnings: &[String]) -> Result<(), CliError> {
    doc.insert("warnings".into(), json!(warnings));
    serde_json::to_writer_pretty(&mut *out, &Value::Object(doc)).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// Header plus rows of already formatted cells.
pub fn write_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn num(x: f64) -> String {
    format!("{x:e}")
}
