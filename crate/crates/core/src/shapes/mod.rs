//! The shape algebra: shapes, tags, nullability, the preferred-shape order
//! and the common preferred shape (`csh`).

mod lub;
mod order;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::BULLET;

pub use self::lub::{collapse_collections, csh, erase_labels};
pub use self::order::{explain_not_preferred, is_preferred, Violation};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", content = "of", rename_all = "snake_case")]
pub enum Shape {
    Bot,
    Null,
    /// The top shape; labels list the statically known alternatives.
    Any(Vec<Shape>),
    Bool,
    Bit,
    Int,
    Float,
    Text,
    Nullable(Box<Shape>),
    Collection(Items),
    Record(RecordShape),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "form", content = "of", rename_all = "snake_case")]
pub enum Items {
    /// `[σ]`: every element has the element shape.
    Homogeneous(Box<Shape>),
    /// `[σ1, ψ1 | … | σn, ψn]`, one entry per shape tag.
    Heterogeneous(Vec<Entry>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Entry {
    pub shape: Shape,
    pub multiplicity: Multiplicity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Multiplicity {
    #[serde(rename = "1")]
    ExactlyOne,
    #[serde(rename = "1?")]
    ZeroOrOne,
    #[serde(rename = "*")]
    Many,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordShape {
    pub name: String,
    pub fields: Vec<Field>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Field {
    pub name: String,
    pub shape: Shape,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShapeTag {
    Collection,
    Nullable,
    Number,
    String,
    Bool,
    Any,
    Record(String),
}

#[derive(Debug, Error, PartialEq)]
#[error("shape `{0}` has no tag")]
pub struct UndefinedTag(pub String);

impl ShapeTag {
    /// Member name used for this alternative in generated classes.
    pub fn member_name(&self) -> &str {
        match self {
            ShapeTag::Collection => "Array",
            ShapeTag::Nullable => "Nullable",
            ShapeTag::Number => "Number",
            ShapeTag::String => "String",
            ShapeTag::Bool => "Boolean",
            ShapeTag::Any => "Any",
            ShapeTag::Record(name) if name == BULLET => "Record",
            ShapeTag::Record(name) => name,
        }
    }
}

impl fmt::Display for ShapeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeTag::Collection => f.write_str("collection"),
            ShapeTag::Nullable => f.write_str("nullable"),
            ShapeTag::Number => f.write_str("number"),
            ShapeTag::String => f.write_str("string"),
            ShapeTag::Bool => f.write_str("bool"),
            ShapeTag::Any => f.write_str("any"),
            ShapeTag::Record(name) => f.write_str(name),
        }
    }
}

pub fn tag_of(s: &Shape) -> Result<ShapeTag, UndefinedTag> {
    s.tag().ok_or_else(|| UndefinedTag(s.to_string()))
}

/// Wraps non-nullable shapes in `nullable<…>`. A heterogeneous collection
/// read from `null` is empty, so its exactly-one entries become optional.
pub fn add_nullable(s: Shape) -> Shape {
    match s {
        s if s.is_non_nullable() => Shape::Nullable(Box::new(s)),
        Shape::Collection(Items::Heterogeneous(entries)) => Shape::Collection(Items::Heterogeneous(
            entries.into_iter().map(|e| Entry { multiplicity: e.multiplicity.relaxed(), ..e }).collect(),
        )),
        other => other,
    }
}

pub fn drop_nullable(s: Shape) -> Shape {
    match s {
        Shape::Nullable(inner) => *inner,
        other => other,
    }
}

impl Multiplicity {
    /// The multiplicity of an entry absent from the other side of a join.
    pub fn relaxed(self) -> Self {
        match self {
            Multiplicity::ExactlyOne => Multiplicity::ZeroOrOne,
            other => other,
        }
    }

    pub fn join(self, other: Self) -> Self {
        self.max(other)
    }

    pub fn from_count(count: usize) -> Self {
        if count == 1 {
            Multiplicity::ExactlyOne
        } else {
            Multiplicity::Many
        }
    }
}

impl Shape {
    pub fn record(name: impl Into<String>, fields: Vec<(&str, Shape)>) -> Shape {
        Shape::Record(RecordShape {
            name: name.into(),
            fields: fields.into_iter().map(|(n, s)| Field { name: n.to_string(), shape: s }).collect(),
        })
    }

    pub fn object(fields: Vec<(&str, Shape)>) -> Shape {
        Shape::record(BULLET, fields)
    }

    pub fn nullable(inner: Shape) -> Shape {
        Shape::Nullable(Box::new(inner))
    }

    pub fn list(element: Shape) -> Shape {
        Shape::Collection(Items::Homogeneous(Box::new(element)))
    }

    pub fn hetero(entries: Vec<(Shape, Multiplicity)>) -> Shape {
        Shape::Collection(Items::Heterogeneous(
            entries.into_iter().map(|(shape, multiplicity)| Entry { shape, multiplicity }).collect(),
        ))
    }

    pub fn any(labels: Vec<Shape>) -> Shape {
        Shape::Any(labels)
    }

    /// Non-nullable shapes `σ̂`: primitives and records.
    pub fn is_non_nullable(&self) -> bool {
        matches!(self, Shape::Bool | Shape::Bit | Shape::Int | Shape::Float | Shape::Text | Shape::Record(_))
    }

    pub fn is_primitive(&self) -> bool {
        matches!(self, Shape::Bool | Shape::Bit | Shape::Int | Shape::Float | Shape::Text)
    }

    pub fn tag(&self) -> Option<ShapeTag> {
        Some(match self {
            Shape::Bot | Shape::Null => return None,
            Shape::Any(_) => ShapeTag::Any,
            Shape::Bool => ShapeTag::Bool,
            Shape::Bit | Shape::Int | Shape::Float => ShapeTag::Number,
            Shape::Text => ShapeTag::String,
            Shape::Nullable(_) => ShapeTag::Nullable,
            Shape::Collection(_) => ShapeTag::Collection,
            Shape::Record(r) => ShapeTag::Record(r.name.clone()),
        })
    }

    /// Whether `null` data is acceptable for this shape.
    pub fn accepts_null(&self) -> bool {
        match self {
            Shape::Null | Shape::Nullable(_) | Shape::Any(_) => true,
            Shape::Collection(Items::Homogeneous(_)) => true,
            Shape::Collection(Items::Heterogeneous(entries)) => {
                entries.iter().all(|e| e.multiplicity != Multiplicity::ExactlyOne)
            }
            _ => false,
        }
    }

    /// Canonical form used for comparison: labels and entries sorted by tag,
    /// record fields sorted by name.
    pub fn normalized(&self) -> Shape {
        match self {
            Shape::Any(labels) => {
                let mut labels: Vec<Shape> = labels.iter().map(Shape::normalized).collect();
                labels.sort_by(tag_order);
                Shape::Any(labels)
            }
            Shape::Nullable(inner) => Shape::nullable(inner.normalized()),
            Shape::Collection(Items::Homogeneous(s)) => Shape::list(s.normalized()),
            Shape::Collection(Items::Heterogeneous(entries)) => {
                let mut entries: Vec<Entry> = entries
                    .iter()
                    .map(|e| Entry { shape: e.shape.normalized(), multiplicity: e.multiplicity })
                    .collect();
                entries.sort_by(|a, b| tag_order(&a.shape, &b.shape));
                Shape::Collection(Items::Heterogeneous(entries))
            }
            Shape::Record(r) => {
                let mut fields: Vec<Field> =
                    r.fields.iter().map(|f| Field { name: f.name.clone(), shape: f.shape.normalized() }).collect();
                fields.sort_by(|a, b| a.name.cmp(&b.name));
                Shape::Record(RecordShape { name: r.name.clone(), fields })
            }
            other => other.clone(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Shape::Any(labels) => 1 + labels.iter().map(Shape::depth).max().unwrap_or(0),
            Shape::Nullable(inner) => 1 + inner.depth(),
            Shape::Collection(Items::Homogeneous(s)) => 1 + s.depth(),
            Shape::Collection(Items::Heterogeneous(es)) => 1 + es.iter().map(|e| e.shape.depth()).max().unwrap_or(0),
            Shape::Record(r) => 1 + r.fields.iter().map(|f| f.shape.depth()).max().unwrap_or(0),
            _ => 0,
        }
    }
}

impl RecordShape {
    pub fn get(&self, name: &str) -> Option<&Shape> {
        self.fields.iter().find(|f| f.name == name).map(|f| &f.shape)
    }
}

fn tag_order(a: &Shape, b: &Shape) -> Ordering {
    a.tag().cmp(&b.tag())
}

fn structurally_equal(a: &Shape, b: &Shape) -> bool {
    use Shape::*;
    match (a, b) {
        (Bot, Bot) | (Null, Null) | (Bool, Bool) | (Bit, Bit) | (Int, Int) | (Float, Float) | (Text, Text) => true,
        (Any(x), Any(y)) => x.len() == y.len() && x.iter().zip(y).all(|(p, q)| structurally_equal(p, q)),
        (Nullable(x), Nullable(y)) => structurally_equal(x, y),
        (Collection(Items::Homogeneous(x)), Collection(Items::Homogeneous(y))) => structurally_equal(x, y),
        (Collection(Items::Heterogeneous(x)), Collection(Items::Heterogeneous(y))) => {
            x.len() == y.len()
                && x.iter()
                    .zip(y)
                    .all(|(p, q)| p.multiplicity == q.multiplicity && structurally_equal(&p.shape, &q.shape))
        }
        (Record(r), Record(s)) => {
            r.name == s.name
                && r.fields.len() == s.fields.len()
                && r.fields
                    .iter()
                    .zip(&s.fields)
                    .all(|(f, g)| f.name == g.name && structurally_equal(&f.shape, &g.shape))
        }
        _ => false,
    }
}

/// Equality up to the order of labels, entries and record fields.
impl PartialEq for Shape {
    fn eq(&self, other: &Self) -> bool {
        structurally_equal(&self.normalized(), &other.normalized())
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Multiplicity::ExactlyOne => "1",
            Multiplicity::ZeroOrOne => "1?",
            Multiplicity::Many => "*",
        })
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Bot => f.write_str("⊥"),
            Shape::Null => f.write_str("null"),
            Shape::Any(labels) if labels.is_empty() => f.write_str("any"),
            Shape::Any(labels) => {
                f.write_str("any<")?;
                for (i, l) in labels.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{l}")?;
                }
                f.write_str(">")
            }
            Shape::Bool => f.write_str("bool"),
            Shape::Bit => f.write_str("bit"),
            Shape::Int => f.write_str("int"),
            Shape::Float => f.write_str("float"),
            Shape::Text => f.write_str("string"),
            Shape::Nullable(inner) => write!(f, "nullable<{inner}>"),
            Shape::Collection(Items::Homogeneous(s)) => write!(f, "[{s}]"),
            Shape::Collection(Items::Heterogeneous(entries)) if entries.is_empty() => f.write_str("[⊥]"),
            Shape::Collection(Items::Heterogeneous(entries)) => {
                f.write_str("[")?;
                for (i, e) in entries.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    write!(f, "{}, {}", e.shape, e.multiplicity)?;
                }
                f.write_str("]")
            }
            Shape::Record(r) => {
                f.write_str(&r.name)?;
                if r.fields.is_empty() {
                    return f.write_str(" {}");
                }
                f.write_str(" { ")?;
                for (i, field) in r.fields.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}: {}", field.name, field.shape)?;
                }
                f.write_str(" }")
            }
        }
    }
}
