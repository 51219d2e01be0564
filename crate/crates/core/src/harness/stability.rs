//! Stability of inference: after adding a sample, code written against the
//! old provided types can be mechanically rewritten to run against the new
//! ones and still produce the same values.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use super::gen::TrialRng;
use crate::access::{build_access, AccessPath, PathStep};
use crate::data::DataValue;
use crate::foo::{check_type, evaluate, Env, EvalOutcome, Expr, FooType, FooValue};
use crate::inference::{infer_many, InferenceConfig};
use crate::pipeline::provide_normalized;
use crate::provider::Provided;

/// One rewrite from the stability remark.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilityRewrite {
    /// `match e with Some(v) -> v | None -> exn`, for a value that became
    /// nullable.
    WrapOptionMatch,
    /// `e.Tag`, an option, for a value that became part of a labelled top
    /// shape.
    ProjectAnyLabel(String),
    /// `int(e)`, for an int that became a float.
    CoerceIntOfFloat,
}

impl fmt::Display for StabilityRewrite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilityRewrite::WrapOptionMatch => f.write_str("unwrap"),
            StabilityRewrite::ProjectAnyLabel(tag) => write!(f, "project {tag}"),
            StabilityRewrite::CoerceIntOfFloat => f.write_str("int"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StabilityVerdict {
    Stable {
        value: FooValue,
        rewrites: Vec<StabilityRewrite>,
    },
    /// The probe does not evaluate to a value under the old types.
    ProbeFailed(String),
    RewriteNotFound,
    ValueChanged {
        old: FooValue,
        new: Vec<FooValue>,
    },
}

impl StabilityVerdict {
    pub fn is_stable(&self) -> bool {
        matches!(self, StabilityVerdict::Stable { .. })
    }
}

impl fmt::Display for StabilityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilityVerdict::Stable { rewrites, .. } if rewrites.is_empty() => f.write_str("stable without rewrites"),
            StabilityVerdict::Stable { rewrites, .. } => {
                let list: Vec<String> = rewrites.iter().map(ToString::to_string).collect();
                write!(f, "stable after {}", list.join(", "))
            }
            StabilityVerdict::ProbeFailed(m) => write!(f, "probe failed on the old types: {m}"),
            StabilityVerdict::RewriteNotFound => {
                f.write_str("no rewrite sequence of length 4 or less fits the new types")
            }
            StabilityVerdict::ValueChanged { old, new } => {
                write!(f, "old value {old:?}, rewritten probes gave {new:?}")
            }
        }
    }
}

pub const MAX_REWRITES: usize = 4;
const FUEL: u64 = 200_000;

fn unwrap(e: Expr) -> Expr {
    Expr::match_option(e, "s", Expr::var("s"), Expr::Exn)
}

fn nth(e: Expr, i: usize) -> Expr {
    let hit = if i == 0 { Expr::var("h") } else { nth(Expr::var("t"), i - 1) };
    Expr::match_list(e, "h", "t", hit, Expr::Exn)
}

struct Search<'a> {
    old: &'a Provided,
    new: &'a Provided,
    /// Old probe steps, with the class each member step was taken on.
    steps: Vec<(PathStep, Option<String>)>,
    target: FooType,
    found: Vec<(Expr, Vec<StabilityRewrite>)>,
}

impl Search<'_> {
    fn member_on(&self, class: &str, step_class: Option<&str>, name: &str) -> Option<(String, FooType)> {
        let def = self.new.classes.get(class)?;
        let origin = step_class.and_then(|c| self.old.original_name(c, name));
        let m = def.member(name).filter(|m| self.new.original_name(class, &m.name).is_some()).or_else(|| {
            def.members.iter().find(|m| origin.is_some() && self.new.original_name(class, &m.name) == origin)
        })?;
        Some((m.name.clone(), m.ty.clone()))
    }

    /// Depth-first search using exactly `budget` more rewrites.
    fn go(&mut self, e: Expr, ty: FooType, i: usize, budget: usize, trail: &mut Vec<StabilityRewrite>) {
        if self.found.len() >= 8 {
            return;
        }
        if i == self.steps.len() && budget == 0 && ty == self.target {
            self.found.push((e.clone(), trail.clone()));
            return;
        }
        if i < self.steps.len() {
            let (step, step_class) = self.steps[i].clone();
            let direct = match (&step, &ty) {
                (PathStep::Member(n), FooType::Class(c)) => {
                    self.member_on(c, step_class.as_deref(), n).map(|(m, t)| (Expr::member(e.clone(), &m), t))
                }
                (PathStep::Index(k), FooType::List(t)) => Some((nth(e.clone(), *k), (**t).clone())),
                (PathStep::Unwrap, FooType::Option(t)) => Some((unwrap(e.clone()), (**t).clone())),
                _ => None,
            };
            if let Some((next, t)) = direct {
                self.go(next, t, i + 1, budget, trail);
            }
        }
        if budget == 0 {
            return;
        }
        let mut rewrites: Vec<(StabilityRewrite, Expr, FooType)> = Vec::new();
        match &ty {
            FooType::Option(t) => rewrites.push((StabilityRewrite::WrapOptionMatch, unwrap(e.clone()), (**t).clone())),
            FooType::Float if self.wants_int(i) => {
                rewrites.push((StabilityRewrite::CoerceIntOfFloat, Expr::IntCoerce(Box::new(e.clone())), FooType::Int))
            }
            FooType::Class(c) => {
                if let Some(def) = self.new.classes.get(c) {
                    for m in &def.members {
                        if let (FooType::Option(_), Some(_)) = (&m.ty, self.new.original_name(c, &m.name)) {
                            let projected = Expr::member(e.clone(), &m.name);
                            rewrites.push((StabilityRewrite::ProjectAnyLabel(m.name.clone()), projected, m.ty.clone()));
                        }
                    }
                }
            }
            _ => {}
        }
        for (r, next, t) in rewrites {
            trail.push(r);
            self.go(next, t, i, budget - 1, trail);
            trail.pop();
        }
    }

    fn wants_int(&self, i: usize) -> bool {
        i == self.steps.len() && self.target == FooType::Int
    }
}

/// A probe step paired with the class a member step applies to.
type AnnotatedStep = (PathStep, Option<String>);

/// Old probe steps with their classes, and the type the probe ends at.
fn annotate(p: &Provided, path: &AccessPath) -> Option<(Vec<AnnotatedStep>, FooType)> {
    let mut ty = p.root_type.clone();
    let mut out = Vec::new();
    for s in &path.0 {
        let (class, next) = match (s, &ty) {
            (PathStep::Member(n), FooType::Class(c)) => (Some(c.clone()), p.classes.get(c)?.member(n)?.ty.clone()),
            (PathStep::Index(_), FooType::List(t)) | (PathStep::Unwrap, FooType::Option(t)) => (None, (**t).clone()),
            _ => return None,
        };
        out.push((s.clone(), class));
        ty = next;
    }
    Some((out, ty))
}

/// Checks that `probe`, evaluated on `input` against types provided from
/// `samples`, can be rewritten to give the same value once `new_sample` is
/// added to the samples.
pub fn check_stability(
    samples: &[DataValue],
    new_sample: &DataValue,
    input: &DataValue,
    probe: &AccessPath,
    cfg: &InferenceConfig,
) -> StabilityVerdict {
    let old = provide_normalized(&infer_many(samples, cfg));
    let mut extended = samples.to_vec();
    extended.push(new_sample.clone());
    let new = provide_normalized(&infer_many(&extended, cfg));
    check_stability_between(&old, &new, input, probe)
}

pub fn check_stability_between(
    old: &Provided,
    new: &Provided,
    input: &DataValue,
    probe: &AccessPath,
) -> StabilityVerdict {
    let old_value = match build_access(old, old.apply(input.clone()), &old.root_type, probe) {
        Ok((e, _)) => match evaluate(&old.classes, &e, FUEL) {
            Ok(EvalOutcome::Value(v)) => v,
            Ok(other) => return StabilityVerdict::ProbeFailed(format!("{other:?}")),
            Err(err) => return StabilityVerdict::ProbeFailed(err.to_string()),
        },
        Err(err) => return StabilityVerdict::ProbeFailed(err.to_string()),
    };
    let Some((steps, target)) = annotate(old, probe) else {
        return StabilityVerdict::ProbeFailed("probe needs explicit unwrap steps".into());
    };
    let mut search = Search { old, new, steps, target: target.clone(), found: Vec::new() };
    let mut new_values = Vec::new();
    for budget in 0..=MAX_REWRITES {
        search.found.clear();
        search.go(new.apply(input.clone()), new.root_type.clone(), 0, budget, &mut Vec::new());
        for (e, rewrites) in std::mem::take(&mut search.found) {
            if check_type(&new.classes, &Env::new(), &e, &target).is_err() {
                continue;
            }
            match evaluate(&new.classes, &e, FUEL) {
                Ok(EvalOutcome::Value(v)) if v == old_value => return StabilityVerdict::Stable { value: v, rewrites },
                Ok(EvalOutcome::Value(v)) => new_values.push(v),
                _ => {}
            }
        }
    }
    if new_values.is_empty() {
        StabilityVerdict::RewriteNotFound
    } else {
        StabilityVerdict::ValueChanged { old: old_value, new: new_values }
    }
}

fn is_prim(t: &FooType) -> bool {
    matches!(t, FooType::Int | FooType::Float | FooType::Bool | FooType::Text)
}

/// A random access path from the root to a primitive value of `input`,
/// unwrapping options explicitly. `None` when the walk hits a dead end.
pub fn random_probe(rng: &mut TrialRng, p: &Provided, input: &DataValue) -> Option<AccessPath> {
    let mut path = AccessPath::default();
    let mut ty = p.root_type.clone();
    for _ in 0..12 {
        if is_prim(&ty) {
            return Some(path);
        }
        let step = match &ty {
            FooType::Class(c) => {
                let def = p.classes.get(c)?;
                let named: Vec<_> = def.members.iter().filter(|m| p.original_name(c, &m.name).is_some()).collect();
                let m = named.choose(rng)?;
                PathStep::Member(m.name.clone())
            }
            FooType::List(_) => PathStep::Index(rng.gen_range(0..2)),
            FooType::Option(_) => PathStep::Unwrap,
            _ => return None,
        };
        path.0.push(step);
        let (e, t) = build_access(p, p.apply(input.clone()), &p.root_type, &path).ok()?;
        if !matches!(evaluate(&p.classes, &e, FUEL), Ok(EvalOutcome::Value(_))) {
            return None;
        }
        ty = t;
    }
    None
}
