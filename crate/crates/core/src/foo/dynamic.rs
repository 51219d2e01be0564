use super::Prim;
use crate::data::DataValue;
use crate::ingest::text::{is_bit_text, parse_bool_text, parse_float_text, parse_int_text};
use crate::shapes::{Items, Multiplicity, Shape};

/// `convFloat`: integers widen, numeric text is parsed.
pub fn conv_float(d: &DataValue) -> Option<DataValue> {
    match d {
        DataValue::Int(i) => Some(DataValue::Float(*i as f64)),
        DataValue::Float(x) => Some(DataValue::Float(*x)),
        DataValue::Str(s) => parse_float_text(s).map(DataValue::Float),
        _ => None,
    }
}

/// `convPrim`: `None` when the value cannot be read as `p`.
pub fn conv_prim(p: Prim, d: &DataValue) -> Option<DataValue> {
    match (p, d) {
        (Prim::Float, d) => conv_float(d),
        (Prim::Int, DataValue::Int(i)) => Some(DataValue::Int(*i)),
        (Prim::Int, DataValue::Str(s)) => parse_int_text(s).map(DataValue::Int),
        (Prim::Bool, DataValue::Bool(b)) => Some(DataValue::Bool(*b)),
        (Prim::Bool, DataValue::Int(i @ (0 | 1))) => Some(DataValue::Bool(*i == 1)),
        (Prim::Bool, DataValue::Str(s)) if is_bit_text(s) => Some(DataValue::Bool(s == "1")),
        (Prim::Bool, DataValue::Str(s)) => parse_bool_text(s).map(DataValue::Bool),
        (Prim::Text, DataValue::Str(s)) => Some(DataValue::Str(s.clone())),
        _ => None,
    }
}

/// The runtime shape test. A `true` answer means the converter generated for
/// `s` reads `d` without getting stuck.
pub fn has_shape(s: &Shape, d: &DataValue) -> bool {
    match (s, d) {
        (Shape::Any(_), _) => true,
        (Shape::Bot, _) => false,
        (Shape::Null, d) => d.is_null(),
        (Shape::Nullable(inner), d) => d.is_null() || has_shape(inner, d),
        (Shape::Int, d) => conv_prim(Prim::Int, d).is_some(),
        (Shape::Float, d) => conv_float(d).is_some(),
        (Shape::Bit | Shape::Bool, d) => conv_prim(Prim::Bool, d).is_some(),
        (Shape::Text, DataValue::Str(_)) => true,
        (Shape::Collection(_), DataValue::Null) => s.accepts_null(),
        (Shape::Collection(Items::Homogeneous(e)), DataValue::List(items)) => items.iter().all(|d| has_shape(e, d)),
        (Shape::Collection(Items::Heterogeneous(entries)), DataValue::List(items)) => {
            items.iter().all(|d| d.is_null() || entries.iter().any(|e| has_shape(&e.shape, d)))
                && entries
                    .iter()
                    .filter(|e| e.multiplicity == Multiplicity::ExactlyOne)
                    .all(|e| items.iter().any(|d| !d.is_null() && has_shape(&e.shape, d)))
        }
        (Shape::Record(r), DataValue::Record(v)) => {
            r.name == v.name
                && r.fields.iter().all(|f| match v.get(&f.name) {
                    Some(d) => has_shape(&f.shape, d),
                    None => has_shape(&f.shape, &DataValue::Null),
                })
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_cases() {
        assert!(has_shape(&Shape::Float, &DataValue::Int(7)));
        assert!(has_shape(&Shape::list(Shape::Int), &DataValue::Null));
        assert!(!has_shape(&Shape::record("Person", vec![("name", Shape::Text)]), &DataValue::str("x")));
        assert_eq!(conv_float(&DataValue::Int(42)), Some(DataValue::Float(42.0)));
        assert_eq!(conv_prim(Prim::Bool, &DataValue::Int(42)), None);
        assert_eq!(conv_float(&DataValue::str("35.14229")), Some(DataValue::Float(35.14229)));
    }

    #[test]
    fn bits() {
        assert_eq!(conv_prim(Prim::Bool, &DataValue::Int(1)), Some(DataValue::Bool(true)));
        assert_eq!(conv_prim(Prim::Bool, &DataValue::str("0")), Some(DataValue::Bool(false)));
        assert!(has_shape(&Shape::Bit, &DataValue::Bool(true)));
        assert!(!has_shape(&Shape::Bit, &DataValue::Int(2)));
    }

    #[test]
    fn records_allow_missing_nullable_fields() {
        let s =
            Shape::object(vec![("a", Shape::Int), ("b", Shape::nullable(Shape::Text)), ("c", Shape::list(Shape::Int))]);
        assert!(has_shape(&s, &DataValue::object(vec![("a", DataValue::Int(1))])));
        assert!(!has_shape(&s, &DataValue::object(vec![("b", DataValue::str("x"))])));
        assert!(has_shape(&s, &DataValue::object(vec![("a", DataValue::str("12")), ("z", DataValue::Null)])));
    }

    #[test]
    fn heterogeneous_requires_exactly_one_entries() {
        let s = Shape::hetero(vec![(Shape::Int, Multiplicity::ExactlyOne), (Shape::Text, Multiplicity::Many)]);
        assert!(has_shape(&s, &DataValue::List(vec![DataValue::Int(1), DataValue::str("a"), DataValue::Null])));
        assert!(!has_shape(&s, &DataValue::List(vec![DataValue::str("a")])));
        assert!(!has_shape(&s, &DataValue::Null));
        assert!(!has_shape(&s, &DataValue::List(vec![DataValue::Int(1), DataValue::Bool(true)])));
    }
}
