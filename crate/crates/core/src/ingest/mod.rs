//! Parsing JSON, XML and CSV source text into [`DataValue`]s.

mod csv;
mod json;
pub mod text;
mod xml;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::DataValue;

pub use self::csv::parse_csv;
pub use self::json::parse_json;
pub use self::text::infer_primitive_text;
pub use self::xml::parse_xml;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceFormat {
    Json,
    Xml,
    Csv,
}

impl SourceFormat {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "json" => Some(SourceFormat::Json),
            "xml" | "xhtml" => Some(SourceFormat::Xml),
            "csv" => Some(SourceFormat::Csv),
            _ => None,
        }
    }
}

impl fmt::Display for SourceFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceFormat::Json => "JSON",
            SourceFormat::Xml => "XML",
            SourceFormat::Csv => "CSV",
        })
    }
}

impl std::str::FromStr for SourceFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(SourceFormat::Json),
            "xml" => Ok(SourceFormat::Xml),
            "csv" => Ok(SourceFormat::Csv),
            other => Err(format!("unknown format `{other}` (expected json, xml or csv)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct IngestConfig {
    /// Cell texts read as `null`.
    pub missing_tokens: BTreeSet<String>,
    pub date_formats: Vec<String>,
    /// Let shape inference read numbers and booleans out of JSON strings.
    pub parse_json_strings: bool,
    /// Recognize the `0`/`1` bit shape in textual sources.
    pub bit_inference: bool,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            missing_tokens: ["", "#N/A", "NA", "null"].into_iter().map(String::from).collect(),
            date_formats: vec!["YYYY-MM-DD".to_string()],
            parse_json_strings: true,
            bit_inference: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Text { line: usize, column: usize },
    Cell { row: usize, column: usize },
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Text { line, column } => write!(f, "line {line}, column {column}"),
            Location::Cell { row, column } => write!(f, "row {row}, column {column}"),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum IngestError {
    #[error("malformed {format} document at {location}: {message}")]
    MalformedDocument { format: SourceFormat, location: Location, message: String },
    #[error("number `{0}` cannot be represented")]
    UnrepresentableNumber(String),
    #[error("empty input: a header row is required")]
    EmptyInput,
    #[error("CSV needs at least one missing-value token")]
    NoMissingTokens,
}

pub fn parse_document(text: &str, format: SourceFormat, cfg: &IngestConfig) -> Result<DataValue, IngestError> {
    match format {
        SourceFormat::Json => parse_json(text, cfg),
        SourceFormat::Xml => parse_xml(text, cfg),
        SourceFormat::Csv => parse_csv(text, cfg),
    }
}
