use serde_json::Value;

use super::{IngestConfig, IngestError, Location, SourceFormat};
use crate::data::{DataValue, Record, BULLET};

/// Objects become records named `•`. Strings are kept verbatim; reading
/// numbers out of them is left to shape inference and the runtime.
pub fn parse_json(text: &str, _cfg: &IngestConfig) -> Result<DataValue, IngestError> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        if e.to_string().contains("number out of range") {
            IngestError::UnrepresentableNumber(offending_number(text, e.line(), e.column()))
        } else {
            IngestError::MalformedDocument {
                format: SourceFormat::Json,
                location: Location::Text { line: e.line(), column: e.column() },
                message: e.to_string(),
            }
        }
    })?;
    convert(value)
}

fn offending_number(text: &str, line: usize, column: usize) -> String {
    let Some(l) = text.lines().nth(line.saturating_sub(1)) else {
        return String::new();
    };
    let end = column.min(l.len());
    let start = l[..end]
        .rfind(|c: char| !(c.is_ascii_digit() || matches!(c, '-' | '+' | '.' | 'e' | 'E')))
        .map_or(0, |i| i + 1);
    l[start..end].to_string()
}

fn convert(value: Value) -> Result<DataValue, IngestError> {
    Ok(match value {
        Value::Null => DataValue::Null,
        Value::Bool(b) => DataValue::Bool(b),
        Value::Number(n) => match n.as_i64() {
            Some(i) => DataValue::Int(i),
            None => {
                let x = n.as_f64().ok_or_else(|| IngestError::UnrepresentableNumber(n.to_string()))?;
                if !x.is_finite() {
                    return Err(IngestError::UnrepresentableNumber(n.to_string()));
                }
                DataValue::Float(x)
            }
        },
        Value::String(s) => DataValue::Str(s),
        Value::Array(items) => DataValue::List(items.into_iter().map(convert).collect::<Result<_, _>>()?),
        Value::Object(map) => DataValue::Record(Record::new(
            BULLET,
            map.into_iter().map(|(k, v)| Ok((k, convert(v)?))).collect::<Result<_, IngestError>>()?,
        )),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<DataValue, IngestError> {
        parse_json(s, &IngestConfig::default())
    }

    #[test]
    fn object_becomes_bullet_record() {
        let v = parse(r#"{ "name":"Jan", "age":25 }"#).unwrap();
        assert_eq!(v, DataValue::object(vec![("name", DataValue::str("Jan")), ("age", DataValue::Int(25))]));
    }

    #[test]
    fn numbers() {
        assert_eq!(parse("3.5").unwrap(), DataValue::Float(3.5));
        assert_eq!(parse("1e2").unwrap(), DataValue::Float(100.0));
        assert_eq!(parse("-7").unwrap(), DataValue::Int(-7));
        assert_eq!(parse("18446744073709551615").unwrap(), DataValue::Float(18446744073709551615.0));
        assert!(matches!(parse("[1e400]"), Err(IngestError::UnrepresentableNumber(n)) if n == "1e400"));
    }

    #[test]
    fn empty_list_and_strings() {
        assert_eq!(parse("[]").unwrap(), DataValue::List(vec![]));
        assert_eq!(parse(r#""35.14229""#).unwrap(), DataValue::str("35.14229"));
    }

    #[test]
    fn syntax_error_has_position() {
        match parse("{\n  \"a\": }") {
            Err(IngestError::MalformedDocument { location: Location::Text { line, .. }, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
