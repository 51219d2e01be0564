use std::fmt;

use super::{Entry, Items, Multiplicity, Shape};

/// The preferred-shape relation `a ⊑ b`: data of shape `a` can be read
/// through accessors generated for `b`.
pub fn is_preferred(a: &Shape, b: &Shape) -> bool {
    use Shape::*;
    match (a, b) {
        (_, Any(_)) | (Bot, _) => true,
        (_, Bot) => false,
        (Null, b) => b.accepts_null(),
        (Nullable(x), Nullable(y)) => is_preferred(x, y),
        (Nullable(_), _) => false,
        (x, Nullable(y)) => is_preferred(x, y),
        (Int, Int) | (Float, Float) | (Bool, Bool) | (Text, Text) | (Bit, Bit) => true,
        (Int, Float) | (Bit, Int) | (Bit, Float) | (Bit, Bool) => true,
        (Collection(x), Collection(y)) => items_preferred(x, y),
        (Record(r), Record(s)) => {
            r.name == s.name
                && s.fields.iter().all(|f| match r.get(&f.name) {
                    Some(u) => is_preferred(u, &f.shape),
                    None => f.shape.accepts_null(),
                })
        }
        _ => false,
    }
}

fn same_tag(a: &Shape, b: &Shape) -> bool {
    matches!((a.tag(), b.tag()), (Some(x), Some(y)) if x == y)
}

fn items_preferred(a: &Items, b: &Items) -> bool {
    match (a, b) {
        (Items::Homogeneous(s), Items::Homogeneous(t)) => is_preferred(s, t),
        (Items::Heterogeneous(es), Items::Homogeneous(t)) => es.iter().all(|e| is_preferred(&e.shape, t)),
        (Items::Homogeneous(s), Items::Heterogeneous(fs)) => {
            matches!(**s, Shape::Bot)
                || (fs.iter().all(|f| f.multiplicity != Multiplicity::ExactlyOne)
                    && fs.iter().any(|f| {
                        f.multiplicity == Multiplicity::Many && same_tag(s, &f.shape) && is_preferred(s, &f.shape)
                    }))
        }
        (Items::Heterogeneous(es), Items::Heterogeneous(fs)) => {
            es.iter().all(|e| matching_entry(e, fs).is_some()) && required_covered(es, fs)
        }
    }
}

fn matching_entry<'a>(e: &Entry, fs: &'a [Entry]) -> Option<&'a Entry> {
    fs.iter()
        .find(|f| same_tag(&e.shape, &f.shape) && e.multiplicity <= f.multiplicity && is_preferred(&e.shape, &f.shape))
}

fn required_covered(es: &[Entry], fs: &[Entry]) -> bool {
    fs.iter()
        .filter(|f| f.multiplicity == Multiplicity::ExactlyOne)
        .all(|f| es.iter().any(|e| e.multiplicity == Multiplicity::ExactlyOne && same_tag(&e.shape, &f.shape)))
}

/// The first place where `found ⋢ expected`, with a path like `.items[].name`.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub path: String,
    /// `None` when the field is missing.
    pub found: Option<Shape>,
    pub expected: Shape,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() { "." } else { &self.path };
        match &self.found {
            Some(found) => write!(f, "{path}: {found} ⋢ {}", self.expected),
            None => write!(f, "{path}: missing field ⋢ {}", self.expected),
        }
    }
}

/// Explains why `a ⋢ b`, descending into records and collections to the
/// innermost offending shape. Returns `None` when `a ⊑ b`.
pub fn explain_not_preferred(a: &Shape, b: &Shape) -> Option<Violation> {
    if is_preferred(a, b) {
        return None;
    }
    Some(explain_at(a, b, String::new()))
}

fn explain_at(a: &Shape, b: &Shape, path: String) -> Violation {
    let here = |path: String| Violation { path, found: Some(a.clone()), expected: b.clone() };
    match (a, b) {
        (Shape::Nullable(x), Shape::Nullable(y)) => explain_at(x, y, path),
        (x, Shape::Nullable(y)) if !matches!(x, Shape::Nullable(_)) => explain_at(x, y, path),
        (Shape::Record(r), Shape::Record(s)) if r.name == s.name => {
            for f in &s.fields {
                let sub = format!("{path}.{}", f.name);
                match r.get(&f.name) {
                    Some(u) if !is_preferred(u, &f.shape) => return explain_at(u, &f.shape, sub),
                    None if !f.shape.accepts_null() => {
                        return Violation { path: sub, found: None, expected: f.shape.clone() }
                    }
                    _ => {}
                }
            }
            here(path)
        }
        (Shape::Collection(Items::Homogeneous(s)), Shape::Collection(Items::Homogeneous(t))) => {
            explain_at(s, t, format!("{path}[]"))
        }
        (Shape::Collection(Items::Heterogeneous(es)), Shape::Collection(Items::Homogeneous(t))) => {
            match es.iter().find(|e| !is_preferred(&e.shape, t)) {
                Some(e) => explain_at(&e.shape, t, format!("{path}[]")),
                None => here(path),
            }
        }
        (Shape::Collection(Items::Heterogeneous(es)), Shape::Collection(Items::Heterogeneous(fs))) => {
            for e in es {
                if matching_entry(e, fs).is_none() {
                    if let Some(f) = fs.iter().find(|f| same_tag(&e.shape, &f.shape)) {
                        if !is_preferred(&e.shape, &f.shape) {
                            return explain_at(&e.shape, &f.shape, format!("{path}[]"));
                        }
                    }
                }
            }
            here(path)
        }
        _ => here(path),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::Multiplicity::*;

    fn p(a: &Shape, b: &Shape) -> bool {
        is_preferred(a, b)
    }

    #[test]
    fn primitives() {
        assert!(p(&Shape::Int, &Shape::Float));
        assert!(!p(&Shape::Float, &Shape::Int));
        assert!(p(&Shape::Bit, &Shape::Bool));
        assert!(p(&Shape::Bit, &Shape::Int));
        assert!(!p(&Shape::Bool, &Shape::Int));
        assert!(p(&Shape::Text, &Shape::Any(vec![])));
        assert!(p(&Shape::Bot, &Shape::Text));
        assert!(!p(&Shape::Text, &Shape::Bot));
    }

    #[test]
    fn null_and_nullable() {
        assert!(p(&Shape::Null, &Shape::nullable(Shape::Int)));
        assert!(p(&Shape::Null, &Shape::list(Shape::Int)));
        assert!(!p(&Shape::Null, &Shape::Int));
        assert!(p(&Shape::Int, &Shape::nullable(Shape::Float)));
        assert!(!p(&Shape::nullable(Shape::Int), &Shape::Int));
        assert!(!p(&Shape::Null, &Shape::hetero(vec![(Shape::Int, ExactlyOne)])));
        assert!(p(&Shape::Null, &Shape::hetero(vec![(Shape::Int, ZeroOrOne)])));
    }

    #[test]
    fn records() {
        let wide = Shape::object(vec![("x", Shape::Int), ("y", Shape::Text)]);
        let narrow = Shape::object(vec![("x", Shape::Float)]);
        assert!(p(&wide, &narrow));
        assert!(!p(&narrow, &wide));
        let optional = Shape::object(vec![("x", Shape::Int), ("y", Shape::nullable(Shape::Text))]);
        assert!(p(&narrow.clone(), &Shape::object(vec![("x", Shape::Float), ("z", Shape::nullable(Shape::Int))])));
        assert!(p(&Shape::object(vec![("x", Shape::Int)]), &optional));
        assert!(!p(&Shape::record("a", vec![]), &Shape::record("b", vec![])));
    }

    #[test]
    fn heterogeneous_collections() {
        let ab = Shape::hetero(vec![(Shape::Int, ExactlyOne), (Shape::Text, Many)]);
        let relaxed = Shape::hetero(vec![(Shape::Float, ZeroOrOne), (Shape::Text, Many), (Shape::Bool, ZeroOrOne)]);
        assert!(p(&ab, &relaxed));
        assert!(!p(&relaxed, &ab));
        assert!(p(&ab, &Shape::list(Shape::Any(vec![]))));
        assert!(p(&Shape::list(Shape::Bot), &ab));
        assert!(p(&Shape::list(Shape::Int), &Shape::hetero(vec![(Shape::Float, Many)])));
        assert!(!p(&Shape::list(Shape::Int), &Shape::hetero(vec![(Shape::Float, ZeroOrOne)])));
    }

    #[test]
    fn violation_paths() {
        let a = Shape::object(vec![("name", Shape::Int)]);
        let b = Shape::object(vec![("name", Shape::Text)]);
        assert_eq!(explain_not_preferred(&a, &b).unwrap().to_string(), ".name: int ⋢ string");
        let a = Shape::object(vec![("items", Shape::list(Shape::object(vec![("v", Shape::Bool)])))]);
        let b = Shape::object(vec![("items", Shape::list(Shape::object(vec![("v", Shape::Float)])))]);
        assert_eq!(explain_not_preferred(&a, &b).unwrap().to_string(), ".items[].v: bool ⋢ float");
        let missing = explain_not_preferred(&Shape::object(vec![]), &Shape::object(vec![("id", Shape::Int)])).unwrap();
        assert_eq!(missing.to_string(), ".id: missing field ⋢ int");
        assert!(explain_not_preferred(&Shape::Int, &Shape::Float).is_none());
        assert_eq!(explain_not_preferred(&Shape::Float, &Shape::Int).unwrap().to_string(), ".: float ⋢ int");
    }
}
