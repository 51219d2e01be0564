//! The uniform first-order data value shared by JSON, XML and CSV documents.
//!
//! Records carry a name (the XML element name, or [`BULLET`] for JSON objects
//! and CSV rows) and an ordered list of fields. Field order is kept for
//! display but ignored by equality.

use std::fmt;

use thiserror::Error;

/// Record name used for JSON objects and CSV rows, and the field name holding
/// XML element content.
pub const BULLET: &str = "•";

#[derive(Debug, Clone)]
pub enum DataValue {
    Int(i64),
    Float(f64),
    Str(String),
    Bool(bool),
    Null,
    List(Vec<DataValue>),
    Record(Record),
}

#[derive(Debug, Clone)]
pub struct Record {
    pub name: String,
    pub fields: Vec<(String, DataValue)>,
}

impl Record {
    pub fn new(name: impl Into<String>, fields: Vec<(String, DataValue)>) -> Self {
        Record { name: name.into(), fields }
    }

    pub fn get(&self, field: &str) -> Option<&DataValue> {
        self.fields.iter().find(|(n, _)| n == field).map(|(_, v)| v)
    }

    pub fn is_bullet(&self) -> bool {
        self.name == BULLET
    }
}

impl DataValue {
    pub fn record(name: impl Into<String>, fields: Vec<(&str, DataValue)>) -> Self {
        DataValue::Record(Record::new(name, fields.into_iter().map(|(n, v)| (n.to_string(), v)).collect()))
    }

    /// A JSON-style record named `•`.
    pub fn object(fields: Vec<(&str, DataValue)>) -> Self {
        Self::record(BULLET, fields)
    }

    pub fn str(s: impl Into<String>) -> Self {
        DataValue::Str(s.into())
    }

    pub fn is_null(&self) -> bool {
        matches!(self, DataValue::Null)
    }

    pub fn as_record(&self) -> Option<&Record> {
        match self {
            DataValue::Record(r) => Some(r),
            _ => None,
        }
    }

    pub fn canonical_text(&self) -> String {
        self.to_string()
    }
}

/// Structural equality. Records compare as unordered field maps; an integer
/// is never equal to a float.
pub fn data_equal(a: &DataValue, b: &DataValue) -> bool {
    use DataValue::*;
    match (a, b) {
        (Int(x), Int(y)) => x == y,
        (Float(x), Float(y)) => x == y,
        (Str(x), Str(y)) => x == y,
        (Bool(x), Bool(y)) => x == y,
        (Null, Null) => true,
        (List(xs), List(ys)) => xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| data_equal(x, y)),
        (Record(r), Record(s)) => {
            r.name == s.name
                && r.fields.len() == s.fields.len()
                && r.fields.iter().all(|(n, v)| s.get(n).is_some_and(|w| data_equal(v, w)))
        }
        _ => false,
    }
}

impl PartialEq for DataValue {
    fn eq(&self, other: &Self) -> bool {
        data_equal(self, other)
    }
}

fn is_plain_name(name: &str) -> bool {
    if name == BULLET {
        return true;
    }
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | ':'))
}

fn write_name(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
    if is_plain_name(name) {
        f.write_str(name)
    } else {
        write_quoted(f, name)
    }
}

fn write_quoted(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    // serde_json never fails on a plain string
    f.write_str(&serde_json::to_string(s).expect("string serialization"))
}

pub(crate) fn format_float(x: f64) -> String {
    format!("{x:?}")
}

impl fmt::Display for DataValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataValue::Int(i) => write!(f, "{i}"),
            DataValue::Float(x) => f.write_str(&format_float(*x)),
            DataValue::Str(s) => write_quoted(f, s),
            DataValue::Bool(b) => write!(f, "{b}"),
            DataValue::Null => f.write_str("null"),
            DataValue::List(items) => {
                f.write_str("[")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str("]")
            }
            DataValue::Record(r) => {
                write_name(f, &r.name)?;
                if r.fields.is_empty() {
                    return f.write_str(" {}");
                }
                let mut fields: Vec<_> = r.fields.iter().collect();
                fields.sort_by(|a, b| a.0.cmp(&b.0));
                f.write_str(" { ")?;
                for (i, (name, value)) in fields.into_iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write_name(f, name)?;
                    write!(f, " ↦ {value}")?;
                }
                f.write_str(" }")
            }
        }
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("cannot read canonical data at byte {position}: {message}")]
pub struct ReadError {
    pub position: usize,
    pub message: String,
}

/// Reads the canonical textual form produced by `Display` back into a value.
pub fn read_canonical(text: &str) -> Result<DataValue, ReadError> {
    let mut reader = Reader { src: text, pos: 0 };
    let value = reader.value()?;
    reader.skip_ws();
    if reader.pos != text.len() {
        return Err(reader.error("trailing input"));
    }
    Ok(value)
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
}

impl Reader<'_> {
    fn error(&self, message: &str) -> ReadError {
        ReadError { position: self.pos, message: message.to_string() }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ReadError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{token}`")))
        }
    }

    fn quoted(&mut self) -> Result<String, ReadError> {
        let rest = self.rest();
        let mut de = serde_json::Deserializer::from_str(rest).into_iter::<String>();
        match de.next() {
            Some(Ok(s)) => {
                self.pos += de.byte_offset();
                Ok(s)
            }
            _ => Err(self.error("bad string literal")),
        }
    }

    fn name(&mut self) -> Result<String, ReadError> {
        self.skip_ws();
        if self.rest().starts_with('"') {
            return self.quoted();
        }
        if self.rest().starts_with(BULLET) {
            self.pos += BULLET.len();
            return Ok(BULLET.to_string());
        }
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | ':')))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected a name"));
        }
        let name = self.rest()[..len].to_string();
        self.pos += len;
        Ok(name)
    }

    fn value(&mut self) -> Result<DataValue, ReadError> {
        self.skip_ws();
        let rest = self.rest();
        if rest.starts_with('[') {
            self.pos += 1;
            let mut items = Vec::new();
            if self.eat("]") {
                return Ok(DataValue::List(items));
            }
            loop {
                items.push(self.value()?);
                if self.eat("]") {
                    return Ok(DataValue::List(items));
                }
                self.expect(";")?;
            }
        }
        if rest.starts_with(|c: char| c == '-' || c.is_ascii_digit()) {
            let len =
                rest.find(|c: char| !(c.is_ascii_alphanumeric() || matches!(c, '-' | '+' | '.'))).unwrap_or(rest.len());
            let lit = rest[..len].to_string();
            self.pos += len;
            let value = if lit.contains(['.', 'e', 'E']) {
                lit.parse().map(DataValue::Float).ok()
            } else {
                lit.parse().map(DataValue::Int).ok()
            };
            return value.ok_or_else(|| self.error("bad number"));
        }
        // a string literal is a record name only when `{` follows
        let start = self.pos;
        let name = self.name()?;
        if self.eat("{") {
            let mut fields = Vec::new();
            if self.eat("}") {
                return Ok(DataValue::Record(Record::new(name, fields)));
            }
            loop {
                let field = self.name()?;
                self.expect("↦")?;
                fields.push((field, self.value()?));
                if self.eat("}") {
                    return Ok(DataValue::Record(Record::new(name, fields)));
                }
                self.expect(",")?;
            }
        }
        if self.src[start..].trim_start().starts_with('"') {
            return Ok(DataValue::Str(name));
        }
        match name.as_str() {
            "null" => Ok(DataValue::Null),
            "true" => Ok(DataValue::Bool(true)),
            "false" => Ok(DataValue::Bool(false)),
            _ => Err(ReadError { position: start, message: format!("unexpected `{name}`") }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_equality_ignores_field_order() {
        let a = DataValue::object(vec![("x", DataValue::Int(1)), ("y", DataValue::Int(2))]);
        let b = DataValue::object(vec![("y", DataValue::Int(2)), ("x", DataValue::Int(1))]);
        assert!(data_equal(&a, &b));
    }

    #[test]
    fn int_and_float_differ() {
        assert!(!data_equal(&DataValue::Int(5), &DataValue::Float(5.0)));
    }

    #[test]
    fn lists_are_ordered() {
        let a = DataValue::List(vec![DataValue::Int(1), DataValue::Int(2)]);
        let b = DataValue::List(vec![DataValue::Int(2), DataValue::Int(1)]);
        assert!(!data_equal(&a, &b));
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(DataValue::Null.canonical_text(), "null");
        assert_eq!(DataValue::List(vec![]).canonical_text(), "[]");
        let root = DataValue::record(
            "root",
            vec![
                ("id", DataValue::Int(1)),
                (BULLET, DataValue::List(vec![DataValue::record("item", vec![(BULLET, DataValue::str("Hello!"))])])),
            ],
        );
        assert_eq!(root.canonical_text(), r#"root { id ↦ 1, • ↦ [item { • ↦ "Hello!" }] }"#);
    }

    #[test]
    fn floats_keep_a_marker() {
        assert_eq!(DataValue::Float(42.0).canonical_text(), "42.0");
        assert_eq!(read_canonical("42.0").unwrap(), DataValue::Float(42.0));
        assert_eq!(read_canonical("1e300").unwrap(), DataValue::Float(1e300));
    }

    #[test]
    fn odd_names_are_quoted() {
        let v = DataValue::object(vec![("a b", DataValue::str("null")), ("true", DataValue::Null)]);
        let text = v.canonical_text();
        assert_eq!(text, r#"• { "a b" ↦ "null", true ↦ null }"#);
        assert_eq!(read_canonical(&text).unwrap(), v);
    }

    #[test]
    fn reader_rejects_garbage() {
        assert!(read_canonical("[1; 2").is_err());
        assert!(read_canonical("nope").is_err());
        assert!(read_canonical("1 2").is_err());
    }
}
