//! Shape inference from sample values.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::DataValue;
use crate::ingest::text::{is_bit_text, is_integer_text, parse_bool_text, parse_float_text};
use crate::ingest::{IngestConfig, SourceFormat};
use crate::shapes::{csh, Entry, Field, Items, Multiplicity, RecordShape, Shape, ShapeTag};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct InferenceConfig {
    /// Unify all XML records of the same name.
    pub global_xml: bool,
    /// Infer per-tag collection entries rather than one element shape.
    pub hetero_collections: bool,
    /// Read numbers and booleans written inside strings.
    pub text_primitives: bool,
    /// Strings `"0"` and `"1"` infer as `bit`.
    pub bit_strings: bool,
    /// Integers `0` and `1` infer as `bit`; used for CSV cells, which were
    /// text before ingestion.
    pub bit_integers: bool,
    pub max_depth: usize,
}

impl Default for InferenceConfig {
    fn default() -> Self {
        InferenceConfig {
            global_xml: false,
            hetero_collections: true,
            text_primitives: true,
            bit_strings: true,
            bit_integers: false,
            max_depth: 64,
        }
    }
}

impl InferenceConfig {
    /// Defaults for documents of the given format read with `ingest`.
    pub fn for_source(format: SourceFormat, ingest: &IngestConfig) -> Self {
        InferenceConfig {
            text_primitives: ingest.parse_json_strings,
            bit_strings: ingest.bit_inference && format == SourceFormat::Json,
            bit_integers: ingest.bit_inference && format == SourceFormat::Csv,
            ..Self::default()
        }
    }

    /// The plain model: homogeneous collections and no bit shape.
    pub fn core() -> Self {
        InferenceConfig { hetero_collections: false, bit_strings: false, bit_integers: false, ..Self::default() }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum InferenceError {
    #[error("record `{name}` nests itself; global inference gave up at depth {depth}")]
    DepthExceeded { name: String, depth: usize },
}

pub fn infer_one(d: &DataValue, cfg: &InferenceConfig) -> Shape {
    match d {
        DataValue::Int(0 | 1) if cfg.bit_integers => Shape::Bit,
        DataValue::Int(_) => Shape::Int,
        DataValue::Float(_) => Shape::Float,
        DataValue::Bool(_) => Shape::Bool,
        DataValue::Null => Shape::Null,
        DataValue::Str(s) => infer_text(s, cfg),
        DataValue::List(items) if cfg.hetero_collections => infer_hetero(items, cfg),
        DataValue::List(items) => Shape::list(items.iter().fold(Shape::Bot, |acc, d| csh(&acc, &infer_one(d, cfg)))),
        DataValue::Record(r) => Shape::Record(RecordShape {
            name: r.name.clone(),
            fields: r.fields.iter().map(|(n, v)| Field { name: n.clone(), shape: infer_one(v, cfg) }).collect(),
        }),
    }
}

fn infer_text(s: &str, cfg: &InferenceConfig) -> Shape {
    if !cfg.text_primitives {
        return Shape::Text;
    }
    if cfg.bit_strings && is_bit_text(s) {
        Shape::Bit
    } else if is_integer_text(s) && s.parse::<i64>().is_ok() {
        Shape::Int
    } else if parse_float_text(s).is_some() {
        Shape::Float
    } else if parse_bool_text(s).is_some() {
        Shape::Bool
    } else {
        Shape::Text
    }
}

fn infer_hetero(items: &[DataValue], cfg: &InferenceConfig) -> Shape {
    let mut groups: Vec<(ShapeTag, Shape, usize)> = Vec::new();
    for item in items {
        let shape = infer_one(item, cfg);
        let Some(tag) = shape.tag() else { continue };
        match groups.iter_mut().find(|(t, _, _)| *t == tag) {
            Some((_, joined, count)) => {
                *joined = csh(joined, &shape);
                *count += 1;
            }
            None => groups.push((tag, shape, 1)),
        }
    }
    Shape::Collection(Items::Heterogeneous(
        groups
            .into_iter()
            .map(|(_, shape, count)| Entry { shape, multiplicity: Multiplicity::from_count(count) })
            .collect(),
    ))
}

/// Left fold of `csh` over the samples, starting from `⊥`.
pub fn infer_many(ds: &[DataValue], cfg: &InferenceConfig) -> Shape {
    ds.iter().fold(Shape::Bot, |acc, d| csh(&acc, &infer_one(d, cfg)))
}

/// Inference where every record of a given name gets the join of all
/// records of that name in the document.
pub fn infer_global_xml(d: &DataValue, cfg: &InferenceConfig) -> Result<Shape, InferenceError> {
    infer_global(infer_one(d, cfg), cfg.max_depth)
}

pub fn infer_many_global(ds: &[DataValue], cfg: &InferenceConfig) -> Result<Shape, InferenceError> {
    infer_global(infer_many(ds, cfg), cfg.max_depth)
}

fn infer_global(mut shape: Shape, max_depth: usize) -> Result<Shape, InferenceError> {
    for _ in 0..max_depth {
        let mut joins = BTreeMap::new();
        collect_records(&shape, &mut joins);
        let next = unify(&shape, &joins, 0, max_depth)?;
        if next == shape {
            return Ok(next);
        }
        shape = next;
    }
    Ok(shape)
}

fn collect_records(s: &Shape, joins: &mut BTreeMap<String, Shape>) {
    match s {
        Shape::Any(labels) => labels.iter().for_each(|l| collect_records(l, joins)),
        Shape::Nullable(inner) => collect_records(inner, joins),
        Shape::Collection(Items::Homogeneous(e)) => collect_records(e, joins),
        Shape::Collection(Items::Heterogeneous(es)) => es.iter().for_each(|e| collect_records(&e.shape, joins)),
        Shape::Record(r) => {
            let joined = match joins.get(&r.name) {
                Some(prev) => csh(prev, s),
                None => s.clone(),
            };
            joins.insert(r.name.clone(), joined);
            r.fields.iter().for_each(|f| collect_records(&f.shape, joins));
        }
        _ => {}
    }
}

fn unify(s: &Shape, joins: &BTreeMap<String, Shape>, depth: usize, max: usize) -> Result<Shape, InferenceError> {
    let go = |t: &Shape| unify(t, joins, depth, max);
    Ok(match s {
        Shape::Any(labels) => Shape::Any(labels.iter().map(go).collect::<Result<_, _>>()?),
        Shape::Nullable(inner) => Shape::nullable(go(inner)?),
        Shape::Collection(Items::Homogeneous(e)) => Shape::list(go(e)?),
        Shape::Collection(Items::Heterogeneous(es)) => Shape::Collection(Items::Heterogeneous(
            es.iter()
                .map(|e| Ok(Entry { shape: go(&e.shape)?, multiplicity: e.multiplicity }))
                .collect::<Result<_, _>>()?,
        )),
        Shape::Record(r) => {
            if depth >= max {
                return Err(InferenceError::DepthExceeded { name: r.name.clone(), depth });
            }
            let Some(Shape::Record(joined)) = joins.get(&r.name) else { unreachable!("every record was collected") };
            Shape::Record(RecordShape {
                name: joined.name.clone(),
                fields: joined
                    .fields
                    .iter()
                    .map(|f| Ok(Field { name: f.name.clone(), shape: unify(&f.shape, joins, depth + 1, max)? }))
                    .collect::<Result<_, _>>()?,
            })
        }
        other => other.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::BULLET;
    use crate::ingest::parse_xml;
    use crate::shapes::is_preferred;
    use Multiplicity::*;

    fn cfg() -> InferenceConfig {
        InferenceConfig::default()
    }

    #[test]
    fn primitives() {
        assert_eq!(infer_one(&DataValue::Int(25), &cfg()), Shape::Int);
        assert_eq!(infer_one(&DataValue::str("35.14229"), &cfg()), Shape::Float);
        assert_eq!(infer_one(&DataValue::str("1"), &cfg()), Shape::Bit);
        assert_eq!(infer_one(&DataValue::str("2012"), &cfg()), Shape::Int);
        assert_eq!(infer_one(&DataValue::str("true"), &cfg()), Shape::Bool);
        assert_eq!(infer_one(&DataValue::str("Prague"), &cfg()), Shape::Text);
        assert_eq!(infer_one(&DataValue::Int(1), &cfg()), Shape::Int);
        let csv = InferenceConfig { bit_integers: true, ..cfg() };
        assert_eq!(infer_one(&DataValue::Int(1), &csv), Shape::Bit);
    }

    #[test]
    fn people() {
        let ds = vec![
            DataValue::object(vec![("name", DataValue::str("Jan")), ("age", DataValue::Int(25))]),
            DataValue::object(vec![("name", DataValue::str("Tomas"))]),
            DataValue::object(vec![("name", DataValue::str("Alexander")), ("age", DataValue::Float(3.5))]),
        ];
        assert_eq!(
            infer_many(&ds, &cfg()),
            Shape::object(vec![("name", Shape::Text), ("age", Shape::nullable(Shape::Float))])
        );
        assert_eq!(infer_many(&[], &cfg()), Shape::Bot);
        assert_eq!(infer_many(&[DataValue::Int(1), DataValue::Float(2.5)], &cfg()), Shape::Float);
    }

    #[test]
    fn mixed_list() {
        let d = DataValue::List(vec![DataValue::object(vec![("pages", DataValue::Int(5))]), DataValue::List(vec![])]);
        assert_eq!(
            infer_one(&d, &cfg()),
            Shape::hetero(vec![
                (Shape::object(vec![("pages", Shape::Int)]), ExactlyOne),
                (Shape::hetero(vec![]), ExactlyOne),
            ])
        );
        let nulls = DataValue::List(vec![DataValue::Null, DataValue::Null]);
        assert_eq!(infer_one(&nulls, &cfg()).to_string(), "[⊥]");
        assert_eq!(infer_one(&nulls, &InferenceConfig::core()), Shape::list(Shape::Null));
    }

    #[test]
    fn homogeneous_mode() {
        let d = DataValue::List(vec![DataValue::Int(1), DataValue::Null, DataValue::Float(2.0)]);
        assert_eq!(infer_one(&d, &InferenceConfig::core()), Shape::list(Shape::nullable(Shape::Float)));
    }

    #[test]
    fn samples_are_preferred_to_their_join() {
        let ds = vec![
            DataValue::List(vec![DataValue::Int(1), DataValue::str("a")]),
            DataValue::List(vec![DataValue::Float(1.5)]),
            DataValue::Null,
        ];
        let joined = infer_many(&ds, &cfg());
        for d in &ds {
            assert!(is_preferred(&infer_one(d, &cfg()), &joined), "{d}");
        }
    }

    fn xml(text: &str) -> DataValue {
        parse_xml(text, &IngestConfig::default()).unwrap()
    }

    #[test]
    fn global_inference_unifies_names() {
        let d = xml(r#"<doc><x><table a="1"/></x><y><table b="s"/></y></doc>"#);
        let s = infer_global_xml(&d, &cfg()).unwrap();
        let table =
            Shape::record("table", vec![("a", Shape::nullable(Shape::Int)), ("b", Shape::nullable(Shape::Text))]);
        let wrap =
            |n: &str| (Shape::record(n, vec![(BULLET, Shape::hetero(vec![(table.clone(), ExactlyOne)]))]), ExactlyOne);
        assert_eq!(s, Shape::record("doc", vec![(BULLET, Shape::hetero(vec![wrap("x"), wrap("y")]))]));
    }

    #[test]
    fn global_inference_is_a_no_op_on_distinct_names() {
        let d = xml(r#"<doc><a x="1"/><b>text</b></doc>"#);
        assert_eq!(infer_global_xml(&d, &cfg()).unwrap(), infer_one(&d, &cfg()));
    }

    #[test]
    fn self_nesting_exceeds_depth() {
        let d = xml("<a><a/></a>");
        assert!(matches!(infer_global_xml(&d, &cfg()), Err(InferenceError::DepthExceeded { .. })));
    }
}
