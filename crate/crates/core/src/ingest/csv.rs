use csv::{ReaderBuilder, Trim};

use super::text::infer_primitive_text;
use super::{IngestConfig, IngestError, Location, SourceFormat};
use crate::data::{DataValue, Record, BULLET};

/// Each data row becomes a record named `•` with one field per column.
pub fn parse_csv(text: &str, cfg: &IngestConfig) -> Result<DataValue, IngestError> {
    if cfg.missing_tokens.is_empty() {
        return Err(IngestError::NoMissingTokens);
    }
    let mut reader = ReaderBuilder::new().has_headers(true).trim(Trim::All).from_reader(text.as_bytes());
    let headers: Vec<String> = reader.headers().map_err(csv_error)?.iter().map(str::to_string).collect();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(IngestError::EmptyInput);
    }
    for (i, h) in headers.iter().enumerate() {
        if h.is_empty() || headers[..i].contains(h) {
            return Err(IngestError::MalformedDocument {
                format: SourceFormat::Csv,
                location: Location::Cell { row: 1, column: i + 1 },
                message: format!("header `{h}` is empty or repeated"),
            });
        }
    }

    let mut rows = Vec::new();
    for (index, row) in reader.records().enumerate() {
        let row = row.map_err(csv_error)?;
        if row.len() != headers.len() {
            return Err(IngestError::MalformedDocument {
                format: SourceFormat::Csv,
                location: Location::Cell { row: index + 2, column: row.len().min(headers.len()) + 1 },
                message: format!("expected {} cells, found {}", headers.len(), row.len()),
            });
        }
        let fields =
            headers.iter().zip(row.iter()).map(|(h, cell)| (h.clone(), infer_primitive_text(cell, cfg))).collect();
        rows.push(DataValue::Record(Record::new(BULLET, fields)));
    }
    Ok(DataValue::List(rows))
}

fn csv_error(e: csv::Error) -> IngestError {
    let (row, column) = match e.kind() {
        csv::ErrorKind::UnequalLengths { pos, len, .. } => {
            (pos.as_ref().map_or(0, |p| p.line() as usize), *len as usize + 1)
        }
        _ => (e.position().map_or(0, |p| p.line() as usize), 0),
    };
    IngestError::MalformedDocument {
        format: SourceFormat::Csv,
        location: Location::Cell { row, column },
        message: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const AIR: &str = "Ozone, Temp, Date,       Autofilled
41,    67,   2012-05-01, 0
36.3,  72,   2012-05-02, 1
12.1,  74,   3 kveten,   0
17.5,  #N/A, 2012-05-04, 0
";

    #[test]
    fn sample_rows() {
        let v = parse_csv(AIR, &IngestConfig::default()).unwrap();
        let DataValue::List(rows) = &v else { panic!() };
        assert_eq!(rows.len(), 4);
        let last = rows[3].as_record().unwrap();
        assert_eq!(last.get("Temp"), Some(&DataValue::Null));
        assert_eq!(last.get("Ozone"), Some(&DataValue::Float(17.5)));
        assert_eq!(rows[1].as_record().unwrap().get("Autofilled"), Some(&DataValue::Int(1)));
        assert_eq!(rows[2].as_record().unwrap().get("Date"), Some(&DataValue::str("3 kveten")));
    }

    #[test]
    fn header_only() {
        assert_eq!(parse_csv("a,b\n", &IngestConfig::default()).unwrap(), DataValue::List(vec![]));
    }

    #[test]
    fn errors() {
        assert_eq!(parse_csv("", &IngestConfig::default()), Err(IngestError::EmptyInput));
        let err = parse_csv("a,b\n1,2\n3\n", &IngestConfig::default()).unwrap_err();
        assert!(
            matches!(err, IngestError::MalformedDocument { location: Location::Cell { row: 3, .. }, .. }),
            "{err:?}"
        );
        let cfg = IngestConfig { missing_tokens: Default::default(), ..Default::default() };
        assert_eq!(parse_csv("a\n1\n", &cfg), Err(IngestError::NoMissingTokens));
    }

    #[test]
    fn quoted_cells() {
        let v = parse_csv("name,note\n\"Smith, J\",\"said \"\"hi\"\"\"\n", &IngestConfig::default()).unwrap();
        let DataValue::List(rows) = v else { panic!() };
        assert_eq!(rows[0].as_record().unwrap().get("name"), Some(&DataValue::str("Smith, J")));
    }
}
