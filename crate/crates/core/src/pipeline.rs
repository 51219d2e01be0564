//! Loading samples from files or URLs and running inference and provision
//! over them in one go.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::DataValue;
use crate::inference::{infer_many, infer_many_global, InferenceConfig, InferenceError};
use crate::ingest::{parse_document, IngestConfig, IngestError, SourceFormat};
use crate::provider::{normalize_names, provide, Provided};
use crate::shapes::Shape;

pub const SHAPE_FILE_VERSION: &str = "shape-v1";

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{source_name}: {err}")]
    Io { source_name: String, err: std::io::Error },
    #[error("fetching {url} failed: {message}")]
    Fetch { url: String, message: String },
    #[error("{source_name}: {err}")]
    Malformed { source_name: String, err: IngestError },
    #[error("cannot tell the format of {0}; pass --format")]
    UnknownFormat(String),
    #[error("samples mix {0} and {1} documents")]
    MixedFormats(SourceFormat, SourceFormat),
    #[error("no samples given")]
    NoSamples,
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error("{path}: not a {SHAPE_FILE_VERSION} shape file: {message}")]
    ShapeFile { path: String, message: String },
}

impl LoadError {
    /// I/O and parse failures, as opposed to problems with the data itself.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, LoadError::Inference(_))
    }
}

/// Where a sample comes from: a local path or an `http(s)` URL.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleSource {
    File(PathBuf),
    Url(String),
}

impl SampleSource {
    pub fn parse(s: &str) -> Self {
        if s.starts_with("http://") || s.starts_with("https://") {
            SampleSource::Url(s.to_string())
        } else {
            SampleSource::File(PathBuf::from(s))
        }
    }

    pub fn name(&self) -> String {
        match self {
            SampleSource::File(p) => p.display().to_string(),
            SampleSource::Url(u) => u.clone(),
        }
    }

    fn format_hint(&self) -> Option<SourceFormat> {
        match self {
            SampleSource::File(p) => SourceFormat::from_path(p),
            SampleSource::Url(u) => {
                let path = u.split(['?', '#']).next().unwrap_or(u);
                SourceFormat::from_path(Path::new(path))
            }
        }
    }

    /// Reads the source text. URLs are fetched once and then served from
    /// `cache_dir` when one is given.
    pub fn read(&self, cache_dir: Option<&Path>) -> Result<String, LoadError> {
        match self {
            SampleSource::File(p) => {
                fs::read_to_string(p).map_err(|err| LoadError::Io { source_name: self.name(), err })
            }
            SampleSource::Url(url) => {
                let cached = cache_dir.map(|d| d.join(cache_key(url)));
                if let Some(text) = cached.as_ref().and_then(|p| fs::read_to_string(p).ok()) {
                    return Ok(text);
                }
                let text = fetch(url)?;
                if let (Some(dir), Some(path)) = (cache_dir, cached) {
                    fs::create_dir_all(dir)
                        .and_then(|_| fs::write(&path, &text))
                        .map_err(|err| LoadError::Io { source_name: path.display().to_string(), err })?;
                }
                Ok(text)
            }
        }
    }
}

fn cache_key(url: &str) -> String {
    // FNV-1a; the readable prefix makes the cache directory browsable.
    let hash = url.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100000001b3));
    let readable: String = url
        .trim_start_matches("https://")
        .trim_start_matches("http://")
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '_' })
        .take(48)
        .collect();
    format!("{readable}-{hash:016x}")
}

fn fetch(url: &str) -> Result<String, LoadError> {
    let fail = |message: String| LoadError::Fetch { url: url.to_string(), message };
    let response = ureq::get(url).timeout(Duration::from_secs(30)).call().map_err(|e| fail(e.to_string()))?;
    let mut text = String::new();
    response.into_reader().take(64 << 20).read_to_string(&mut text).map_err(|e| fail(e.to_string()))?;
    Ok(text)
}

/// Sample documents parsed from their sources, all of one format.
#[derive(Debug, Clone)]
pub struct Samples {
    pub format: SourceFormat,
    pub ingest: IngestConfig,
    pub documents: Vec<DataValue>,
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Overrides detection from the file extension.
    pub format: Option<SourceFormat>,
    pub ingest: IngestConfig,
    pub cache_dir: Option<PathBuf>,
}

pub fn load_document(source: &SampleSource, opts: &LoadOptions) -> Result<(SourceFormat, DataValue), LoadError> {
    let format = opts.format.or_else(|| source.format_hint()).ok_or_else(|| LoadError::UnknownFormat(source.name()))?;
    let text = source.read(opts.cache_dir.as_deref())?;
    let d = parse_document(&text, format, &opts.ingest)
        .map_err(|err| LoadError::Malformed { source_name: source.name(), err })?;
    Ok((format, d))
}

pub fn load_samples(sources: &[SampleSource], opts: &LoadOptions) -> Result<Samples, LoadError> {
    let mut format = None;
    let mut documents = Vec::new();
    for s in sources {
        let (f, d) = load_document(s, opts)?;
        match format {
            Some(prev) if prev != f => return Err(LoadError::MixedFormats(prev, f)),
            _ => format = Some(f),
        }
        documents.push(d);
    }
    let format = format.ok_or(LoadError::NoSamples)?;
    Ok(Samples { format, ingest: opts.ingest.clone(), documents })
}

impl Samples {
    /// Inference settings matching how the documents were read.
    pub fn inference_config(&self) -> InferenceConfig {
        InferenceConfig::for_source(self.format, &self.ingest)
    }

    pub fn infer(&self, cfg: &InferenceConfig) -> Result<Shape, InferenceError> {
        if cfg.global_xml {
            infer_many_global(&self.documents, cfg)
        } else {
            Ok(infer_many(&self.documents, cfg))
        }
    }
}

/// Provided types with user-facing member names.
pub fn provide_normalized(shape: &Shape) -> Provided {
    normalize_names(provide(shape))
}

#[derive(Debug, Serialize, Deserialize)]
struct ShapeFile {
    format: String,
    shape: Shape,
}

pub fn shape_to_json(shape: &Shape) -> String {
    let file = ShapeFile { format: SHAPE_FILE_VERSION.to_string(), shape: shape.clone() };
    serde_json::to_string_pretty(&file).expect("shapes always serialize")
}

pub fn shape_from_json(text: &str) -> Result<Shape, String> {
    let file: ShapeFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if file.format != SHAPE_FILE_VERSION {
        return Err(format!("unsupported version `{}`", file.format));
    }
    Ok(file.shape)
}

pub fn write_shape_file(path: &Path, shape: &Shape) -> Result<(), LoadError> {
    fs::write(path, shape_to_json(shape) + "\n")
        .map_err(|err| LoadError::Io { source_name: path.display().to_string(), err })
}

pub fn read_shape_file(path: &Path) -> Result<Shape, LoadError> {
    let text =
        fs::read_to_string(path).map_err(|err| LoadError::Io { source_name: path.display().to_string(), err })?;
    shape_from_json(&text).map_err(|message| LoadError::ShapeFile { path: path.display().to_string(), message })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_file_round_trip() {
        let s = Shape::list(Shape::object(vec![("name", Shape::Text), ("age", Shape::nullable(Shape::Float))]));
        let text = shape_to_json(&s);
        assert!(text.contains("\"shape-v1\""));
        assert_eq!(shape_from_json(&text).unwrap(), s);
        assert!(shape_from_json(&text.replace("shape-v1", "shape-v0")).is_err());
    }

    #[test]
    fn sources_and_cache_keys() {
        assert_eq!(SampleSource::parse("a/b.json"), SampleSource::File("a/b.json".into()));
        let url = SampleSource::parse("https://example.org/data.xml?q=1");
        assert_eq!(url.format_hint(), Some(SourceFormat::Xml));
        assert_ne!(cache_key("http://a/x"), cache_key("http://a/y"));
    }

    #[test]
    fn cached_url_is_read_without_network() {
        let dir = tempfile::tempdir().unwrap();
        let url = "http://example.invalid/people.json";
        fs::write(dir.path().join(cache_key(url)), r#"[{"name":"Jan"}]"#).unwrap();
        let text = SampleSource::parse(url).read(Some(dir.path())).unwrap();
        assert!(text.contains("Jan"));
    }
}
