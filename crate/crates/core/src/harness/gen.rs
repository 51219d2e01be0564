//! Random sample documents, values of a given shape, and mutations that keep
//! an input below the shape inferred from the samples.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::data::{DataValue, Record, BULLET};
use crate::inference::{infer_one, InferenceConfig};
use crate::shapes::{is_preferred, Items, Multiplicity, Shape};

pub type TrialRng = ChaCha8Rng;

const FIELDS: [&str; 6] = ["id", "name", "value", "tags", "when", "x"];
const NAMES: [&str; 3] = ["item", "row", "note"];
const WORDS: [&str; 8] = ["Jan", "Tomas", "Alexander", "CZ", "sky", "2012-05-04", "n/a", "clear"];
const NUMERIC_TEXT: [&str; 6] = ["0", "1", "42", "3.5", "true", "no"];

fn random_int(rng: &mut TrialRng) -> i64 {
    match rng.gen_range(0..4) {
        0 => rng.gen_range(0..2),
        _ => rng.gen_range(-5..100),
    }
}

fn random_text(rng: &mut TrialRng) -> String {
    if rng.gen_bool(0.2) {
        NUMERIC_TEXT.choose(rng).unwrap().to_string()
    } else {
        WORDS.choose(rng).unwrap().to_string()
    }
}

fn random_prim(rng: &mut TrialRng) -> DataValue {
    match rng.gen_range(0..5) {
        0 => DataValue::Int(random_int(rng)),
        1 => DataValue::Float(f64::from(rng.gen_range(-20..200)) / 4.0 + 0.25),
        2 => DataValue::Bool(rng.gen()),
        3 => DataValue::Str(random_text(rng)),
        _ => DataValue::Null,
    }
}

fn random_record(rng: &mut TrialRng, depth: usize) -> Record {
    let name = if rng.gen_bool(0.25) { NAMES.choose(rng).unwrap() } else { BULLET };
    let mut names = FIELDS.to_vec();
    names.shuffle(rng);
    let n = rng.gen_range(1..=4);
    let fields = names[..n].iter().map(|f| (f.to_string(), random_value(rng, depth - 1))).collect();
    Record::new(name, fields)
}

/// An arbitrary document value at most `depth` levels deep.
pub fn random_value(rng: &mut TrialRng, depth: usize) -> DataValue {
    if depth == 0 {
        return random_prim(rng);
    }
    match rng.gen_range(0..10) {
        0..=4 => DataValue::Record(random_record(rng, depth)),
        5 | 6 => {
            let template = random_value(rng, depth - 1);
            let n = rng.gen_range(0..4);
            DataValue::List((0..n).map(|_| vary(rng, &template, 0.3)).collect())
        }
        7 => {
            let n = rng.gen_range(0..4);
            DataValue::List((0..n).map(|_| random_value(rng, depth - 1)).collect())
        }
        _ => random_prim(rng),
    }
}

fn depth(d: &DataValue) -> usize {
    match d {
        DataValue::List(items) => 1 + items.iter().map(depth).max().unwrap_or(0),
        DataValue::Record(r) => 1 + r.fields.iter().map(|(_, v)| depth(v)).max().unwrap_or(0),
        _ => 0,
    }
}

/// A copy of `d` where each part changes with probability `p`: fields are
/// dropped, added or nulled, numbers switch representation, lists grow or
/// shrink and occasionally a value is replaced by one of another kind.
pub fn vary(rng: &mut TrialRng, d: &DataValue, p: f64) -> DataValue {
    if rng.gen_bool(p / 4.0) {
        return random_value(rng, depth(d).min(2));
    }
    match d {
        DataValue::Int(i) if rng.gen_bool(p) => {
            if rng.gen() {
                DataValue::Float(*i as f64 + 0.5)
            } else {
                DataValue::Int(random_int(rng))
            }
        }
        DataValue::Float(_) if rng.gen_bool(p) => DataValue::Float(f64::from(rng.gen_range(0..80)) / 8.0),
        DataValue::Str(_) if rng.gen_bool(p) => DataValue::Str(random_text(rng)),
        DataValue::Record(r) => {
            let mut fields: Vec<(String, DataValue)> = Vec::new();
            for (n, v) in &r.fields {
                match rng.gen_range(0.0..1.0) {
                    x if x < p / 3.0 => {}
                    x if x < p / 2.0 => fields.push((n.clone(), DataValue::Null)),
                    _ => fields.push((n.clone(), vary(rng, v, p))),
                }
            }
            if rng.gen_bool(p / 3.0) {
                let extra = FIELDS.choose(rng).unwrap();
                if r.get(extra).is_none() {
                    fields.push((extra.to_string(), random_value(rng, 1)));
                }
            }
            DataValue::Record(Record::new(r.name.clone(), fields))
        }
        DataValue::List(items) => {
            let mut out: Vec<DataValue> = items.iter().map(|x| vary(rng, x, p)).collect();
            if rng.gen_bool(p) && !out.is_empty() {
                out.remove(rng.gen_range(0..out.len()));
            }
            if rng.gen_bool(p) {
                out.push(match items.choose(rng) {
                    Some(x) => vary(rng, x, p),
                    None => random_value(rng, 1),
                });
            }
            DataValue::List(out)
        }
        other => other.clone(),
    }
}

/// One to four related sample documents: variations of a random template.
pub fn random_samples(rng: &mut TrialRng) -> Vec<DataValue> {
    let template = random_value(rng, 3);
    let n = rng.gen_range(1..=4);
    (0..n).map(|i| if i == 0 { template.clone() } else { vary(rng, &template, 0.35) }).collect()
}

/// A value that the converter for `s` reads without getting stuck, when
/// one exists.
pub fn value_of_shape(rng: &mut TrialRng, s: &Shape) -> Option<DataValue> {
    Some(match s {
        Shape::Bot => return None,
        Shape::Null => DataValue::Null,
        Shape::Any(labels) => match labels.choose(rng) {
            Some(l) if rng.gen_bool(0.8) => return value_of_shape(rng, l),
            _ => random_value(rng, 1),
        },
        Shape::Bit => DataValue::Int(rng.gen_range(0..2)),
        Shape::Bool => DataValue::Bool(rng.gen()),
        Shape::Int => DataValue::Int(random_int(rng)),
        Shape::Float => {
            if rng.gen() {
                DataValue::Int(random_int(rng))
            } else {
                DataValue::Float(f64::from(rng.gen_range(-8..40)) / 2.0)
            }
        }
        Shape::Text => DataValue::Str(WORDS.choose(rng).unwrap().to_string()),
        Shape::Nullable(inner) => {
            if rng.gen_bool(0.3) {
                DataValue::Null
            } else {
                return value_of_shape(rng, inner);
            }
        }
        Shape::Collection(Items::Homogeneous(e)) => {
            let n = if matches!(**e, Shape::Bot) { 0 } else { rng.gen_range(0..4) };
            DataValue::List((0..n).map(|_| value_of_shape(rng, e)).collect::<Option<_>>()?)
        }
        Shape::Collection(Items::Heterogeneous(entries)) => {
            let mut items = Vec::new();
            for e in entries {
                let n = match e.multiplicity {
                    Multiplicity::ExactlyOne => 1,
                    Multiplicity::ZeroOrOne => rng.gen_range(0..2),
                    Multiplicity::Many => rng.gen_range(0..3),
                };
                for _ in 0..n {
                    items.push(value_of_shape(rng, &e.shape)?);
                }
            }
            items.shuffle(rng);
            DataValue::List(items)
        }
        Shape::Record(r) => {
            let mut fields = Vec::new();
            for f in &r.fields {
                if f.shape.accepts_null() && rng.gen_bool(0.2) {
                    continue;
                }
                fields.push((f.name.clone(), value_of_shape(rng, &f.shape)?));
            }
            DataValue::Record(Record::new(r.name.clone(), fields))
        }
    })
}

/// Mutations that keep an input's inferred shape preferred over the shape
/// of the samples.
#[derive(Debug, Clone, PartialEq)]
pub enum SubshapeMutation {
    DropOptionalField { at: Vec<usize>, field: String },
    AddExtraField { at: Vec<usize>, name: String, value: DataValue },
    IntWhereFloat { at: Vec<usize> },
    NullWhereNullable { at: Vec<usize> },
    SwapAnyLabelValue { at: Vec<usize>, value: DataValue },
    ShrinkManyCollection { at: Vec<usize>, index: usize },
}

/// A location in a value (child positions from the root) together with the
/// part of the sample shape describing it.
struct Site<'a> {
    at: Vec<usize>,
    value: &'a DataValue,
    shape: &'a Shape,
}

fn strip_nullable(s: &Shape) -> &Shape {
    match s {
        Shape::Nullable(inner) => inner,
        s => s,
    }
}

fn sites<'a>(d: &'a DataValue, s: &'a Shape, at: Vec<usize>, cfg: &InferenceConfig, out: &mut Vec<Site<'a>>) {
    out.push(Site { at: at.clone(), value: d, shape: s });
    let child = |i: usize| {
        let mut p = at.clone();
        p.push(i);
        p
    };
    match (d, strip_nullable(s)) {
        (DataValue::Record(r), Shape::Record(rs)) => {
            for (i, (n, v)) in r.fields.iter().enumerate() {
                if let Some(fs) = rs.get(n) {
                    sites(v, fs, child(i), cfg, out);
                }
            }
        }
        (DataValue::List(items), Shape::Collection(Items::Homogeneous(e))) => {
            for (i, v) in items.iter().enumerate() {
                sites(v, e, child(i), cfg, out);
            }
        }
        (DataValue::List(items), Shape::Collection(Items::Heterogeneous(entries))) => {
            for (i, v) in items.iter().enumerate() {
                let tag = infer_one(v, cfg).tag();
                if let Some(e) = entries.iter().find(|e| tag.is_some() && e.shape.tag() == tag) {
                    sites(v, &e.shape, child(i), cfg, out);
                }
            }
        }
        _ => {}
    }
}

fn entry_multiplicity(v: &DataValue, s: &Shape, cfg: &InferenceConfig) -> Option<Multiplicity> {
    match strip_nullable(s) {
        Shape::Collection(Items::Homogeneous(_)) => Some(Multiplicity::Many),
        Shape::Collection(Items::Heterogeneous(entries)) => {
            let tag = infer_one(v, cfg).tag()?;
            entries.iter().find(|e| e.shape.tag() == Some(tag.clone())).map(|e| e.multiplicity)
        }
        _ => None,
    }
}

fn candidates(rng: &mut TrialRng, d: &DataValue, sigma: &Shape, cfg: &InferenceConfig) -> Vec<SubshapeMutation> {
    let mut all = Vec::new();
    sites(d, sigma, Vec::new(), cfg, &mut all);
    let mut out = Vec::new();
    for site in all {
        let at = site.at.clone();
        match (site.value, strip_nullable(site.shape)) {
            (DataValue::Record(r), Shape::Record(rs)) => {
                for (n, _) in &r.fields {
                    if rs.get(n).is_none_or(Shape::accepts_null) {
                        out.push(SubshapeMutation::DropOptionalField { at: at.clone(), field: n.clone() });
                    }
                }
                let name =
                    (0..).map(|i| format!("extra{i}")).find(|n| r.get(n).is_none() && rs.get(n).is_none()).unwrap();
                out.push(SubshapeMutation::AddExtraField { at: at.clone(), name, value: random_value(rng, 1) });
            }
            (DataValue::List(items), s) => {
                for (index, v) in items.iter().enumerate() {
                    if entry_multiplicity(v, s, cfg).is_some_and(|m| m != Multiplicity::ExactlyOne) {
                        out.push(SubshapeMutation::ShrinkManyCollection { at: at.clone(), index });
                    }
                }
            }
            (DataValue::Float(_), Shape::Float) => out.push(SubshapeMutation::IntWhereFloat { at: at.clone() }),
            _ => {}
        }
        if !site.value.is_null() && site.shape.accepts_null() {
            out.push(SubshapeMutation::NullWhereNullable { at: at.clone() });
        }
        if let Shape::Any(_) = site.shape {
            if let Some(value) = value_of_shape(rng, site.shape) {
                out.push(SubshapeMutation::SwapAnyLabelValue { at, value });
            }
        }
    }
    out
}

fn locate<'a>(d: &'a mut DataValue, at: &[usize]) -> &'a mut DataValue {
    match at.split_first() {
        None => d,
        Some((&i, rest)) => match d {
            DataValue::Record(r) => locate(&mut r.fields[i].1, rest),
            DataValue::List(items) => locate(&mut items[i], rest),
            _ => unreachable!("mutation sites point at records and lists"),
        },
    }
}

impl SubshapeMutation {
    pub fn apply(&self, d: &DataValue) -> DataValue {
        let mut out = d.clone();
        match self {
            SubshapeMutation::DropOptionalField { at, field } => {
                if let DataValue::Record(r) = locate(&mut out, at) {
                    r.fields.retain(|(n, _)| n != field);
                }
            }
            SubshapeMutation::AddExtraField { at, name, value } => {
                if let DataValue::Record(r) = locate(&mut out, at) {
                    r.fields.push((name.clone(), value.clone()));
                }
            }
            SubshapeMutation::IntWhereFloat { at } => {
                let v = locate(&mut out, at);
                if let DataValue::Float(x) = v {
                    *v = DataValue::Int(x.trunc() as i64);
                }
            }
            SubshapeMutation::NullWhereNullable { at } => *locate(&mut out, at) = DataValue::Null,
            SubshapeMutation::SwapAnyLabelValue { at, value } => *locate(&mut out, at) = value.clone(),
            SubshapeMutation::ShrinkManyCollection { at, index } => {
                if let DataValue::List(items) = locate(&mut out, at) {
                    items.remove(*index);
                }
            }
        }
        out
    }
}

/// Picks a sample and applies up to five mutations, keeping only those after
/// which `infer_one(input) ⊑ sigma` still holds.
pub fn generate_subshape_input(
    rng: &mut TrialRng,
    samples: &[DataValue],
    sigma: &Shape,
    cfg: &InferenceConfig,
) -> (DataValue, Vec<SubshapeMutation>) {
    let mut d = samples.choose(rng).expect("at least one sample").clone();
    let mut applied = Vec::new();
    for _ in 0..rng.gen_range(0..=5) {
        let options = candidates(rng, &d, sigma, cfg);
        let Some(m) = options.choose(rng) else { break };
        let next = m.apply(&d);
        if is_preferred(&infer_one(&next, cfg), sigma) {
            d = next;
            applied.push(m.clone());
        }
    }
    (d, applied)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::infer_many;
    use rand::SeedableRng;

    fn people() -> Vec<DataValue> {
        vec![
            DataValue::object(vec![("name", DataValue::str("Jan")), ("age", DataValue::Int(25))]),
            DataValue::object(vec![("name", DataValue::str("Tomas"))]),
            DataValue::object(vec![("name", DataValue::str("Alexander")), ("age", DataValue::Float(3.5))]),
        ]
    }

    #[test]
    fn mutations_from_the_people_sample() {
        let cfg = InferenceConfig::default();
        let sigma = infer_many(&people(), &cfg);
        let drop = SubshapeMutation::DropOptionalField { at: vec![], field: "age".into() };
        assert_eq!(
            drop.apply(&people()[0]).to_string(),
            DataValue::object(vec![("name", DataValue::str("Jan"))]).to_string()
        );
        let narrow = SubshapeMutation::IntWhereFloat { at: vec![1] }.apply(&people()[2]);
        assert_eq!(narrow.as_record().unwrap().get("age").map(|v| v.to_string()), Some("3".to_string()));
        let extra = SubshapeMutation::AddExtraField { at: vec![], name: "extra0".into(), value: DataValue::Bool(true) };
        let wider = extra.apply(&people()[0]);
        assert_eq!(wider.as_record().unwrap().fields.len(), 3);
        for d in [drop.apply(&people()[0]), narrow, wider] {
            assert!(is_preferred(&infer_one(&d, &cfg), &sigma), "{d}");
        }
    }

    #[test]
    fn generated_inputs_meet_the_premise() {
        let cfg = InferenceConfig::default();
        for seed in 0..200 {
            let mut rng = TrialRng::seed_from_u64(seed);
            let samples = random_samples(&mut rng);
            let sigma = infer_many(&samples, &cfg);
            let (input, _) = generate_subshape_input(&mut rng, &samples, &sigma, &cfg);
            assert!(is_preferred(&infer_one(&input, &cfg), &sigma), "seed {seed}");
        }
    }

    #[test]
    fn values_of_a_shape_have_it() {
        let s = Shape::object(vec![("a", Shape::nullable(Shape::Int)), ("b", Shape::list(Shape::Float))]);
        let mut rng = TrialRng::seed_from_u64(7);
        for _ in 0..50 {
            let d = value_of_shape(&mut rng, &s).unwrap();
            assert!(crate::foo::has_shape(&s, &d), "{d}");
        }
    }
}
