//! Lexical recognition of primitive values written as text.
//!
//! The same recognizers back CSV cell typing, shape inference over JSON
//! strings and the runtime conversions, so the three stay in agreement.

use super::IngestConfig;
use crate::data::DataValue;

fn digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn strip_sign(s: &str) -> &str {
    s.strip_prefix(['-', '+']).unwrap_or(s)
}

/// Integer literal: optional sign followed by decimal digits.
pub fn is_integer_text(s: &str) -> bool {
    digits(strip_sign(s))
}

pub fn parse_int_text(s: &str) -> Option<i64> {
    if is_integer_text(s) {
        s.parse().ok()
    } else {
        None
    }
}

/// Decimal float literal with an optional fraction and exponent. Words like
/// `inf` or `NaN` are not numbers here.
pub fn parse_float_text(s: &str) -> Option<f64> {
    let body = strip_sign(s);
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let (whole, frac) = match mantissa.split_once('.') {
        Some((w, f)) => (w, Some(f)),
        None => (mantissa, None),
    };
    let whole_ok = whole.is_empty() || digits(whole);
    let frac_ok = frac.is_none_or(|f| f.is_empty() || digits(f));
    let has_digit = !whole.is_empty() || frac.is_some_and(|f| !f.is_empty());
    let exp_ok = exponent.is_none_or(|e| digits(strip_sign(e)));
    if !(whole_ok && frac_ok && has_digit && exp_ok) {
        return None;
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

pub fn parse_bool_text(s: &str) -> Option<bool> {
    if s.eq_ignore_ascii_case("true") {
        Some(true)
    } else if s.eq_ignore_ascii_case("false") {
        Some(false)
    } else {
        None
    }
}

pub fn is_bit_text(s: &str) -> bool {
    s == "0" || s == "1"
}

/// `YYYY-MM-DD` with a plausible month and day.
pub fn is_iso_date(s: &str) -> bool {
    let b = s.as_bytes();
    if b.len() != 10 || b[4] != b'-' || b[7] != b'-' {
        return false;
    }
    let num = |r: std::ops::Range<usize>| s[r].parse::<u32>().ok();
    if !digits(&s[0..4]) || !digits(&s[5..7]) || !digits(&s[8..10]) {
        return false;
    }
    matches!((num(5..7), num(8..10)), (Some(m), Some(d)) if (1..=12).contains(&m) && (1..=31).contains(&d))
}

/// Whether `s` matches one of the configured date patterns. Only the ISO
/// pattern is understood; dates stay strings at the value level.
pub fn is_date_like(s: &str, cfg: &IngestConfig) -> bool {
    cfg.date_formats.iter().any(|f| f == "YYYY-MM-DD") && is_iso_date(s)
}

/// Types one textual cell, attribute or element body.
pub fn infer_primitive_text(cell: &str, cfg: &IngestConfig) -> DataValue {
    if cfg.missing_tokens.contains(cell) {
        return DataValue::Null;
    }
    if is_integer_text(cell) {
        return match cell.parse::<i64>() {
            Ok(i) => DataValue::Int(i),
            Err(_) => parse_float_text(cell).map_or_else(|| DataValue::str(cell), DataValue::Float),
        };
    }
    if let Some(x) = parse_float_text(cell) {
        return DataValue::Float(x);
    }
    if let Some(b) = parse_bool_text(cell) {
        return DataValue::Bool(b);
    }
    DataValue::str(cell)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_grammar() {
        for ok in ["36.3", "-1.5", ".5", "5.", "1e10", "2.5E-3", "+7"] {
            assert!(parse_float_text(ok).is_some(), "{ok}");
        }
        for bad in ["", ".", "e5", "inf", "NaN", "1e", "1.2.3", "12a", "1e999"] {
            assert!(parse_float_text(bad).is_none(), "{bad}");
        }
    }

    #[test]
    fn cells() {
        let cfg = IngestConfig::default();
        assert_eq!(infer_primitive_text("#N/A", &cfg), DataValue::Null);
        assert_eq!(infer_primitive_text("", &cfg), DataValue::Null);
        assert_eq!(infer_primitive_text("36.3", &cfg), DataValue::Float(36.3));
        assert_eq!(infer_primitive_text("2012", &cfg), DataValue::Int(2012));
        assert_eq!(infer_primitive_text("TRUE", &cfg), DataValue::Bool(true));
        assert_eq!(infer_primitive_text("3 kveten", &cfg), DataValue::str("3 kveten"));
        assert_eq!(infer_primitive_text("99999999999999999999", &cfg), DataValue::Float(99999999999999999999.0));
    }

    #[test]
    fn dates() {
        let cfg = IngestConfig::default();
        assert!(is_date_like("2012-05-01", &cfg));
        assert!(!is_date_like("2012-13-01", &cfg));
        assert!(!is_date_like("3 kveten", &cfg));
        assert_eq!(infer_primitive_text("2012-05-01", &cfg), DataValue::str("2012-05-01"));
    }
}
