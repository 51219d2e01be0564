use super::{add_nullable, drop_nullable, Entry, Field, Items, RecordShape, Shape};

/// The common preferred shape of `a` and `b`. Rules are tried in a fixed
/// order; the first one that applies wins.
pub fn csh(a: &Shape, b: &Shape) -> Shape {
    use Shape::*;
    if a == b {
        return a.clone();
    }
    match (a, b) {
        (Collection(x), Collection(y)) => Collection(items_csh(x, y)),
        (Bot, other) | (other, Bot) => other.clone(),
        (Null, other) | (other, Null) => add_nullable(other.clone()),
        (Any(x), Any(y)) => Any(merge_labels(x, y)),
        (Any(labels), other) | (other, Any(labels)) => Any(include_label(labels, other)),
        (Int, Float) | (Float, Int) => Float,
        (Bit, other @ (Int | Float | Bool)) | (other @ (Int | Float | Bool), Bit) => other.clone(),
        (Nullable(x), other) | (other, Nullable(x)) => add_nullable(csh(x, other)),
        (Record(r), Record(s)) if r.name == s.name => Record(record_csh(r, s)),
        _ => Any(vec![drop_nullable(a.clone()), drop_nullable(b.clone())]),
    }
}

fn record_csh(r: &RecordShape, s: &RecordShape) -> RecordShape {
    let mut fields: Vec<Field> = r
        .fields
        .iter()
        .map(|f| {
            let shape = match s.get(&f.name) {
                Some(g) => csh(&f.shape, g),
                None => absent(&f.shape),
            };
            Field { name: f.name.clone(), shape }
        })
        .collect();
    for g in &s.fields {
        if r.get(&g.name).is_none() {
            fields.push(Field { name: g.name.clone(), shape: absent(&g.shape) });
        }
    }
    RecordShape { name: r.name.clone(), fields }
}

/// A field missing on one side reads as `null` there.
fn absent(s: &Shape) -> Shape {
    csh(s, &Shape::Null)
}

fn same_tag(a: &Shape, b: &Shape) -> bool {
    matches!((a.tag(), b.tag()), (Some(x), Some(y)) if x == y)
}

fn merge_labels(x: &[Shape], y: &[Shape]) -> Vec<Shape> {
    let mut labels = x.to_vec();
    for l in y {
        labels = include_label(&labels, l);
    }
    labels
}

fn include_label(labels: &[Shape], s: &Shape) -> Vec<Shape> {
    let s = drop_nullable(s.clone());
    let mut out = labels.to_vec();
    if matches!(s, Shape::Bot | Shape::Null) {
        return out;
    }
    match out.iter().position(|l| same_tag(l, &s)) {
        Some(i) => out[i] = drop_nullable(csh(&out[i], &s)),
        None => out.push(s),
    }
    out
}

/// The homogeneous element shape covering every entry.
fn entries_join(entries: &[Entry]) -> Shape {
    entries.iter().fold(Shape::Bot, |acc, e| csh(&acc, &e.shape))
}

fn items_csh(x: &Items, y: &Items) -> Items {
    match (x, y) {
        (Items::Homogeneous(s), Items::Homogeneous(t)) => Items::Homogeneous(Box::new(csh(s, t))),
        (Items::Heterogeneous(es), Items::Heterogeneous(fs)) => Items::Heterogeneous(merge_entries(es, fs)),
        (Items::Heterogeneous(es), Items::Homogeneous(t)) | (Items::Homogeneous(t), Items::Heterogeneous(es)) => {
            Items::Homogeneous(Box::new(csh(&entries_join(es), t)))
        }
    }
}

fn merge_entries(es: &[Entry], fs: &[Entry]) -> Vec<Entry> {
    let mut out: Vec<Entry> = es
        .iter()
        .map(|e| match fs.iter().find(|f| same_tag(&e.shape, &f.shape)) {
            Some(f) => Entry { shape: csh(&e.shape, &f.shape), multiplicity: e.multiplicity.join(f.multiplicity) },
            None => Entry { shape: e.shape.clone(), multiplicity: e.multiplicity.relaxed() },
        })
        .collect();
    for f in fs {
        if !es.iter().any(|e| same_tag(&e.shape, &f.shape)) {
            out.push(Entry { shape: f.shape.clone(), multiplicity: f.multiplicity.relaxed() });
        }
    }
    out
}

/// Replaces heterogeneous collections by homogeneous ones over the join of
/// their entries, keeping labels.
pub fn collapse_collections(s: &Shape) -> Shape {
    map_children(s, collapse_collections, entries_join)
}

/// Removes all labels from top shapes and collapses heterogeneous
/// collections, giving a shape of the unlabelled core model.
pub fn erase_labels(s: &Shape) -> Shape {
    match s {
        Shape::Any(_) => Shape::Any(Vec::new()),
        _ => map_children(s, erase_labels, |entries| erase_labels(&entries_join(entries))),
    }
}

fn map_children(s: &Shape, f: fn(&Shape) -> Shape, join: impl Fn(&[Entry]) -> Shape) -> Shape {
    match s {
        Shape::Any(labels) => Shape::Any(labels.iter().map(f).collect()),
        Shape::Nullable(inner) => Shape::nullable(f(inner)),
        Shape::Collection(Items::Homogeneous(e)) => Shape::list(f(e)),
        Shape::Collection(Items::Heterogeneous(entries)) => Shape::list(f(&join(entries))),
        Shape::Record(r) => Shape::Record(RecordShape {
            name: r.name.clone(),
            fields: r.fields.iter().map(|g| Field { name: g.name.clone(), shape: f(&g.shape) }).collect(),
        }),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::is_preferred;
    use crate::shapes::Multiplicity::*;

    #[test]
    fn documented_joins() {
        assert_eq!(csh(&Shape::Int, &Shape::Float), Shape::Float);
        assert_eq!(csh(&Shape::Float, &Shape::Int), Shape::Float);
        assert_eq!(
            csh(
                &Shape::object(vec![("name", Shape::Text), ("age", Shape::Int)]),
                &Shape::object(vec![("name", Shape::Text)])
            ),
            Shape::object(vec![("name", Shape::Text), ("age", Shape::nullable(Shape::Int))])
        );
        assert_eq!(csh(&Shape::Null, &Shape::Int), Shape::nullable(Shape::Int));
        assert_eq!(
            csh(&Shape::Int, &Shape::Any(vec![Shape::Bool, Shape::Float])),
            Shape::Any(vec![Shape::Bool, Shape::Float])
        );
        let empty = Shape::object(vec![]);
        assert_eq!(csh(&Shape::Text, &empty), Shape::Any(vec![Shape::Text, empty]));
    }

    #[test]
    fn bit_joins() {
        assert_eq!(csh(&Shape::Bit, &Shape::Int), Shape::Int);
        assert_eq!(csh(&Shape::Bool, &Shape::Bit), Shape::Bool);
        assert_eq!(csh(&Shape::Bit, &Shape::Float), Shape::Float);
        assert_eq!(csh(&Shape::Bit, &Shape::Text), Shape::Any(vec![Shape::Bit, Shape::Text]));
    }

    #[test]
    fn labels_stay_tag_distinct_and_non_nullable() {
        let s = csh(&Shape::nullable(Shape::Int), &Shape::Bool);
        assert_eq!(s, Shape::Any(vec![Shape::Int, Shape::Bool]));
        let s = csh(&s, &Shape::nullable(Shape::Float));
        assert_eq!(s, Shape::Any(vec![Shape::Float, Shape::Bool]));
        let s = csh(&s, &Shape::Any(vec![Shape::Text, Shape::Int]));
        assert_eq!(s, Shape::Any(vec![Shape::Float, Shape::Bool, Shape::Text]));
    }

    #[test]
    fn nullable_joins() {
        assert_eq!(csh(&Shape::nullable(Shape::Int), &Shape::Float), Shape::nullable(Shape::Float));
        assert_eq!(csh(&Shape::nullable(Shape::Int), &Shape::nullable(Shape::Float)), Shape::nullable(Shape::Float));
        assert_eq!(csh(&Shape::Null, &Shape::list(Shape::Int)), Shape::list(Shape::Int));
    }

    #[test]
    fn heterogeneous_merge() {
        let a = Shape::hetero(vec![(Shape::Int, ExactlyOne), (Shape::Text, Many)]);
        let b = Shape::hetero(vec![(Shape::Float, ExactlyOne), (Shape::Bool, ExactlyOne)]);
        let joined = csh(&a, &b);
        assert_eq!(
            joined,
            Shape::hetero(vec![(Shape::Float, ExactlyOne), (Shape::Text, Many), (Shape::Bool, ZeroOrOne)])
        );
        assert!(is_preferred(&a, &joined) && is_preferred(&b, &joined));
    }

    #[test]
    fn mixed_collections_become_homogeneous() {
        let a = Shape::hetero(vec![(Shape::Int, ExactlyOne)]);
        assert_eq!(csh(&a, &Shape::list(Shape::Float)), Shape::list(Shape::Float));
    }

    #[test]
    fn erasure() {
        let rec = Shape::object(vec![("x", Shape::Int)]);
        let s = Shape::hetero(vec![(rec.clone(), ExactlyOne), (Shape::Int, Many)]);
        assert_eq!(collapse_collections(&s), Shape::list(Shape::Any(vec![rec, Shape::Int])));
        assert_eq!(erase_labels(&s), Shape::list(Shape::Any(vec![])));
        assert_eq!(erase_labels(&Shape::nullable(Shape::Int)), Shape::nullable(Shape::Int));
    }

    #[test]
    fn algebraic_identities() {
        let shapes = [
            Shape::Int,
            Shape::Null,
            Shape::nullable(Shape::Text),
            Shape::object(vec![("x", Shape::Bit)]),
            Shape::list(Shape::Bool),
            Shape::Any(vec![Shape::Int]),
        ];
        for a in &shapes {
            assert_eq!(&csh(a, a), a);
            assert_eq!(&csh(&Shape::Bot, a), a);
            for b in &shapes {
                assert_eq!(csh(a, b), csh(b, a), "{a} / {b}");
            }
        }
    }
}
