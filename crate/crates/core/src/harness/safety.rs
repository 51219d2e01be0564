//! Relative safety: code written against types provided from the samples
//! never gets stuck on an input whose shape is preferred over theirs.

use std::fmt;

use crate::data::DataValue;
use crate::foo::{normalize, ClassSet, EvalError, Expr, Stuck};
use crate::inference::{infer_many, infer_one, InferenceConfig};
use crate::pipeline::provide_normalized;
use crate::provider::Provided;
use crate::shapes::{explain_not_preferred, Violation};

/// Counts from walking a provided object graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WalkStats {
    pub members: usize,
    pub exceptions: usize,
    /// Set when the member budget ran out before the walk finished.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Safe(WalkStats),
    Stuck { stuck: Stuck, access: String },
    PremiseViolated(Violation),
    Failed(String),
}

impl Verdict {
    pub fn is_safe(&self) -> bool {
        matches!(self, Verdict::Safe(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Safe(s) => write!(f, "safe ({} members evaluated)", s.members),
            Verdict::Stuck { stuck, access } => write!(f, "stuck evaluating `{access}`: {stuck}"),
            Verdict::PremiseViolated(v) => write!(f, "input is not a subshape: {v}"),
            Verdict::Failed(m) => write!(f, "evaluation failed: {m}"),
        }
    }
}

pub enum WalkError {
    Stuck { stuck: Stuck, access: String },
    Eval(EvalError),
}

/// Evaluates `e` and then every member of every object reachable from the
/// result, descending through options and lists.
pub struct Walker<'a> {
    classes: &'a ClassSet,
    fuel: u64,
    budget: usize,
    stats: WalkStats,
}

impl<'a> Walker<'a> {
    pub fn new(classes: &'a ClassSet, fuel: u64, budget: usize) -> Self {
        Walker { classes, fuel, budget, stats: WalkStats::default() }
    }

    pub fn run(mut self, e: &Expr, access: &str) -> Result<WalkStats, WalkError> {
        self.eval_and_walk(e, access)?;
        Ok(self.stats)
    }

    fn eval_and_walk(&mut self, e: &Expr, access: &str) -> Result<(), WalkError> {
        match normalize(self.classes, e, self.fuel, |_| {}).map_err(WalkError::Eval)? {
            Err(stuck) => Err(WalkError::Stuck { stuck, access: access.to_string() }),
            Ok(Expr::Exn) => {
                self.stats.exceptions += 1;
                Ok(())
            }
            Ok(v) => self.walk(&v, access),
        }
    }

    fn walk(&mut self, v: &Expr, access: &str) -> Result<(), WalkError> {
        match v {
            Expr::New(class, _) => {
                let Some(def) = self.classes.get(class) else { return Ok(()) };
                for m in &def.members {
                    if self.stats.members >= self.budget {
                        self.stats.truncated = true;
                        return Ok(());
                    }
                    self.stats.members += 1;
                    let access = format!("{access}.{}", m.name);
                    self.eval_and_walk(&Expr::member(v.clone(), &m.name), &access)?;
                }
                Ok(())
            }
            Expr::Some(inner) => self.walk(inner, &format!("{access}!")),
            Expr::Cons(..) => {
                let mut cur = v;
                let mut i = 0;
                while let Expr::Cons(h, t) = cur {
                    self.walk(h, &format!("{access}[{i}]"))?;
                    cur = t;
                    i += 1;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

pub const WALK_BUDGET: usize = 20_000;

/// Converts `input` with `p` and evaluates every member reachable from it.
pub fn walk_provided(p: &Provided, input: &DataValue, fuel: u64) -> Verdict {
    match Walker::new(&p.classes, fuel, WALK_BUDGET).run(&p.apply(input.clone()), "it") {
        Ok(stats) => Verdict::Safe(stats),
        Err(WalkError::Stuck { stuck, access }) => Verdict::Stuck { stuck, access },
        Err(WalkError::Eval(e)) => Verdict::Failed(e.to_string()),
    }
}

/// Provides types from `samples` and checks that reading `input` through
/// them never gets stuck. Requires `infer_one(input) ⊑ infer_many(samples)`.
pub fn check_relative_safety(samples: &[DataValue], input: &DataValue, cfg: &InferenceConfig, fuel: u64) -> Verdict {
    let sigma = infer_many(samples, cfg);
    if let Some(v) = explain_not_preferred(&infer_one(input, cfg), &sigma) {
        return Verdict::PremiseViolated(v);
    }
    walk_provided(&provide_normalized(&sigma), input, fuel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foo::DEFAULT_FUEL;
    use crate::ingest::{parse_xml, IngestConfig};

    fn people() -> Vec<DataValue> {
        vec![
            DataValue::object(vec![("name", DataValue::str("Jan")), ("age", DataValue::Int(25))]),
            DataValue::object(vec![("name", DataValue::str("Tomas"))]),
            DataValue::object(vec![("name", DataValue::str("Alexander")), ("age", DataValue::Float(3.5))]),
        ]
    }

    #[test]
    fn dropped_field_is_safe() {
        let cfg = InferenceConfig::default();
        let eva = DataValue::object(vec![("name", DataValue::str("Eva"))]);
        let v = check_relative_safety(&people(), &eva, &cfg, DEFAULT_FUEL);
        assert!(v.is_safe(), "{v}");
    }

    #[test]
    fn wrong_primitive_violates_the_premise() {
        let cfg = InferenceConfig::default();
        let bad = DataValue::object(vec![("name", DataValue::Int(1))]);
        match check_relative_safety(&people(), &bad, &cfg, DEFAULT_FUEL) {
            Verdict::PremiseViolated(v) => assert_eq!(v.to_string(), ".name: int ⋢ string"),
            v => panic!("{v}"),
        }
    }

    #[test]
    fn mismatched_input_gets_stuck_without_the_premise() {
        let p = provide_normalized(&infer_many(&people(), &InferenceConfig::default()));
        let bad = DataValue::object(vec![("name", DataValue::Int(1))]);
        assert!(matches!(walk_provided(&p, &bad, DEFAULT_FUEL), Verdict::Stuck { .. }));
    }

    #[test]
    fn unknown_xml_element_is_safe() {
        let ingest = IngestConfig::default();
        let cfg = InferenceConfig { hetero_collections: false, ..InferenceConfig::default() };
        let doc = parse_xml(include_str!("../../fixtures/doc.xml"), &ingest).unwrap();
        let input = parse_xml(include_str!("../../fixtures/doc_with_table.xml"), &ingest).unwrap();
        let v = check_relative_safety(&[doc], &input, &cfg, DEFAULT_FUEL);
        assert!(v.is_safe(), "{v}");
    }
}
