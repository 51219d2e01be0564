//! Small-step, eager, left-to-right reduction by substitution.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::dynamic::{conv_float, conv_prim, has_shape};
use super::{b, typecheck, ClassSet, DataRef, Env, Expr, FooType, OpKind, Prim};
use crate::data::{data_equal, DataValue};

pub const DEFAULT_FUEL: u64 = 1_000_000;

/// A dynamic data operation that could not reduce.
#[derive(Debug, Clone, PartialEq)]
pub struct Stuck {
    pub op: OpKind,
    pub data: DataValue,
    /// Where the data came from in the input, e.g. `.items[2].name`.
    pub path: String,
}

impl fmt::Display for Stuck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() { "." } else { &self.path };
        write!(f, "{} is stuck on {} at {path}", self.op, self.data)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FooValue {
    Data(DataValue),
    None,
    Some(Box<FooValue>),
    Object { class: String, args: Vec<FooValue> },
    List(Vec<FooValue>),
    Closure,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalOutcome {
    Value(FooValue),
    Stuck(Stuck),
    Exn,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("evaluation did not finish within {0} steps")]
    FuelExhausted(u64),
    #[error("ill-formed expression: {0}")]
    IllFormed(String),
}

/// Result of a single reduction step.
#[derive(Debug, Clone)]
pub enum Step {
    Reduced(Expr),
    /// The expression is a value or an exception.
    Normal,
    Stuck(Stuck),
}

enum Halt {
    Stuck(Stuck),
    Ill(String),
}

#[derive(PartialEq)]
enum Progress {
    Stepped,
    Raised,
    Ready,
}

pub fn reduce_step(classes: &ClassSet, e: &Expr) -> Result<Step, EvalError> {
    let mut e = e.clone();
    match (Reducer { classes }).step(&mut e) {
        Ok(true) => Ok(Step::Reduced(e)),
        Ok(false) => Ok(Step::Normal),
        Err(Halt::Stuck(s)) => Ok(Step::Stuck(s)),
        Err(Halt::Ill(m)) => Err(EvalError::IllFormed(m)),
    }
}

pub fn evaluate(classes: &ClassSet, e: &Expr, fuel: u64) -> Result<EvalOutcome, EvalError> {
    evaluate_traced(classes, e, fuel, |_| {})
}

/// Like [`evaluate`], calling `on_step` with every intermediate expression.
pub fn evaluate_traced(
    classes: &ClassSet,
    e: &Expr,
    fuel: u64,
    on_step: impl FnMut(&Expr),
) -> Result<EvalOutcome, EvalError> {
    Ok(match normalize(classes, e, fuel, on_step)? {
        Err(s) => EvalOutcome::Stuck(s),
        Ok(Expr::Exn) => EvalOutcome::Exn,
        Ok(v) => EvalOutcome::Value(to_value(&v).ok_or_else(|| EvalError::IllFormed(v.to_string()))?),
    })
}

/// Reduces `e` to a value expression or `exn`, keeping the expression form
/// so that objects can be inspected further.
pub fn normalize(
    classes: &ClassSet,
    e: &Expr,
    fuel: u64,
    mut on_step: impl FnMut(&Expr),
) -> Result<Result<Expr, Stuck>, EvalError> {
    let reducer = Reducer { classes };
    let mut e = e.clone();
    for _ in 0..fuel {
        match reducer.step(&mut e) {
            Ok(true) => on_step(&e),
            Ok(false) => return Ok(Ok(e)),
            Err(Halt::Stuck(s)) => return Ok(Err(s)),
            Err(Halt::Ill(m)) => return Err(EvalError::IllFormed(m)),
        }
    }
    Err(EvalError::FuelExhausted(fuel))
}

fn to_value(e: &Expr) -> Option<FooValue> {
    Some(match e {
        Expr::Data(d) => FooValue::Data((*d.value).clone()),
        Expr::None(_) => FooValue::None,
        Expr::Some(v) => FooValue::Some(Box::new(to_value(v)?)),
        Expr::New(class, args) => {
            FooValue::Object { class: class.clone(), args: args.iter().map(to_value).collect::<Option<_>>()? }
        }
        Expr::Lam(..) => FooValue::Closure,
        Expr::Nil(_) | Expr::Cons(..) => {
            let mut items = Vec::new();
            let mut cur = e;
            while let Expr::Cons(h, t) = cur {
                items.push(to_value(h)?);
                cur = t;
            }
            matches!(cur, Expr::Nil(_)).then_some(())?;
            FooValue::List(items)
        }
        _ => return None,
    })
}

fn values_equal(a: &Expr, b: &Expr) -> bool {
    match (a, b) {
        (Expr::Data(x), Expr::Data(y)) => data_equal(&x.value, &y.value),
        (Expr::None(_), Expr::None(_)) | (Expr::Nil(_), Expr::Nil(_)) => true,
        (Expr::Some(x), Expr::Some(y)) => values_equal(x, y),
        (Expr::Cons(h1, t1), Expr::Cons(h2, t2)) => values_equal(h1, h2) && values_equal(t1, t2),
        (Expr::New(c1, a1), Expr::New(c2, a2)) => {
            c1 == c2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| values_equal(x, y))
        }
        _ => false,
    }
}

/// Replaces free occurrences of `x` with the closed value `v`.
pub(crate) fn subst(e: Expr, x: &str, v: &Expr) -> Expr {
    let go = |e: Box<Expr>| b(subst(*e, x, v));
    match e {
        Expr::Var(y) if y == x => v.clone(),
        Expr::Data(_) | Expr::Var(_) | Expr::None(_) | Expr::Nil(_) | Expr::Exn => e,
        Expr::Lam(y, t, body) if y == x => Expr::Lam(y, t, body),
        Expr::Lam(y, t, body) => Expr::Lam(y, t, go(body)),
        Expr::App(f, a) => Expr::App(go(f), go(a)),
        Expr::Member(o, n) => Expr::Member(go(o), n),
        Expr::New(c, args) => Expr::New(c, args.into_iter().map(|a| subst(a, x, v)).collect()),
        Expr::Some(e) => Expr::Some(go(e)),
        Expr::MatchOption { scrutinee, var, some, none } => {
            let some = if var == x { some } else { go(some) };
            Expr::MatchOption { scrutinee: go(scrutinee), var, some, none: go(none) }
        }
        Expr::Eq(p, q) => Expr::Eq(go(p), go(q)),
        Expr::If(c, t, f) => Expr::If(go(c), go(t), go(f)),
        Expr::Cons(h, t) => Expr::Cons(go(h), go(t)),
        Expr::MatchList { scrutinee, head, tail, cons, nil } => {
            let cons = if head == x || tail == x { cons } else { go(cons) };
            Expr::MatchList { scrutinee: go(scrutinee), head, tail, cons, nil: go(nil) }
        }
        Expr::ConvFloat(d) => Expr::ConvFloat(go(d)),
        Expr::ConvPrim(p, d) => Expr::ConvPrim(p, go(d)),
        Expr::ConvField { record, field, data, cont } => {
            Expr::ConvField { record, field, data: go(data), cont: go(cont) }
        }
        Expr::ConvNull(d, c) => Expr::ConvNull(go(d), go(c)),
        Expr::ConvElements(d, c) => Expr::ConvElements(go(d), go(c)),
        Expr::HasShape(s, d) => Expr::HasShape(s, go(d)),
        Expr::Choose(l) => Expr::Choose(go(l)),
        Expr::IntCoerce(d) => Expr::IntCoerce(go(d)),
    }
}

struct Reducer<'a> {
    classes: &'a ClassSet,
}

impl Reducer<'_> {
    /// Steps the first non-value among `subs`, left to right.
    fn subs(&self, subs: &mut [&mut Expr]) -> Result<Progress, Halt> {
        for s in subs.iter_mut() {
            if matches!(**s, Expr::Exn) {
                return Ok(Progress::Raised);
            }
            if !s.is_value() {
                return if self.step(s)? { Ok(Progress::Stepped) } else { Err(Halt::Ill(s.to_string())) };
            }
        }
        Ok(Progress::Ready)
    }

    /// Performs one step in place. `Ok(false)` means `e` is already normal.
    fn step(&self, e: &mut Expr) -> Result<bool, Halt> {
        let progress = match e {
            Expr::Data(_) | Expr::Lam(..) | Expr::None(_) | Expr::Nil(_) | Expr::Exn => return Ok(false),
            Expr::Var(x) => return Err(Halt::Ill(format!("free variable `{x}`"))),
            Expr::Some(v) => match self.subs(&mut [&mut **v])? {
                Progress::Ready => return Ok(false),
                p => p,
            },
            Expr::Cons(h, t) => match self.subs(&mut [&mut **h, &mut **t])? {
                Progress::Ready => return Ok(false),
                p => p,
            },
            Expr::New(_, args) => {
                let mut refs: Vec<&mut Expr> = args.iter_mut().collect();
                match self.subs(&mut refs)? {
                    Progress::Ready => return Ok(false),
                    p => p,
                }
            }
            Expr::App(x, y)
            | Expr::Eq(x, y)
            | Expr::ConvNull(x, y)
            | Expr::ConvElements(x, y)
            | Expr::ConvField { data: x, cont: y, .. } => self.subs(&mut [&mut **x, &mut **y])?,
            Expr::Member(x, _)
            | Expr::ConvFloat(x)
            | Expr::ConvPrim(_, x)
            | Expr::HasShape(_, x)
            | Expr::Choose(x)
            | Expr::IntCoerce(x)
            | Expr::If(x, _, _)
            | Expr::MatchOption { scrutinee: x, .. }
            | Expr::MatchList { scrutinee: x, .. } => self.subs(&mut [&mut **x])?,
        };
        match progress {
            Progress::Stepped => {}
            Progress::Raised => *e = Expr::Exn,
            Progress::Ready => {
                let redex = std::mem::take(e);
                *e = self.contract(redex)?;
            }
        }
        Ok(true)
    }

    /// Result type of a continuation `λx:Data. e`, used to annotate `None`
    /// and `nil` produced from `null`.
    fn result_type(&self, cont: &Expr) -> Option<FooType> {
        match typecheck(self.classes, &Env::new(), cont) {
            Ok(FooType::Arrow(_, r)) => Some(*r),
            _ => None,
        }
    }

    fn contract(&self, redex: Expr) -> Result<Expr, Halt> {
        let ill = |e: &Expr| Halt::Ill(format!("no rule applies to `{e}`"));
        Ok(match redex {
            Expr::App(f, a) => match *f {
                Expr::Lam(x, _, body) => subst(*body, &x, &a),
                f => return Err(ill(&f)),
            },
            Expr::Member(o, name) => match *o {
                Expr::New(c, args) => {
                    let class = self.classes.get(&c).ok_or_else(|| Halt::Ill(format!("unknown class `{c}`")))?;
                    let member =
                        class.member(&name).ok_or_else(|| Halt::Ill(format!("class `{c}` has no member `{name}`")))?;
                    class.params.iter().zip(&args).fold(member.body.clone(), |body, ((x, _), v)| subst(body, x, v))
                }
                o => return Err(ill(&o)),
            },
            Expr::Eq(x, y) => Expr::data(DataValue::Bool(values_equal(&x, &y))),
            Expr::If(c, t, f) => match *c {
                Expr::Data(ref d) => match *d.value {
                    DataValue::Bool(true) => *t,
                    DataValue::Bool(false) => *f,
                    _ => return Err(ill(&c)),
                },
                c => return Err(ill(&c)),
            },
            Expr::MatchOption { scrutinee, var, some, none } => match *scrutinee {
                Expr::None(_) => *none,
                Expr::Some(v) => subst(*some, &var, &v),
                s => return Err(ill(&s)),
            },
            Expr::MatchList { scrutinee, head, tail, cons, nil } => match *scrutinee {
                Expr::Nil(_) => *nil,
                Expr::Cons(h, t) => subst(subst(*cons, &head, &h), &tail, &t),
                s => return Err(ill(&s)),
            },
            Expr::ConvFloat(d) => {
                let d = self.datum(*d)?;
                match conv_float(&d.value) {
                    Some(v) => Expr::Data(DataRef { value: Arc::new(v), path: d.path }),
                    None => return Err(stuck(OpKind::ConvFloat, &d)),
                }
            }
            Expr::ConvPrim(p, d) => {
                let d = self.datum(*d)?;
                let op = if p == Prim::Float { OpKind::ConvFloat } else { OpKind::ConvPrim };
                match conv_prim(p, &d.value) {
                    Some(v) => Expr::Data(DataRef { value: Arc::new(v), path: d.path }),
                    None => return Err(stuck(op, &d)),
                }
            }
            Expr::ConvField { record, field, data, cont } => {
                let d = self.datum(*data)?;
                match &*d.value {
                    DataValue::Record(r) if r.name == record => {
                        let value = r.get(&field).cloned().unwrap_or(DataValue::Null);
                        let path = format!("{}.{}", d.path, field);
                        Expr::App(cont, b(Expr::Data(DataRef::at(value, path))))
                    }
                    _ => return Err(stuck(OpKind::ConvField, &d)),
                }
            }
            Expr::ConvNull(data, cont) => {
                let d = self.datum(*data)?;
                if d.value.is_null() {
                    Expr::None(self.result_type(&cont))
                } else {
                    Expr::some(Expr::App(cont, b(Expr::Data(d))))
                }
            }
            Expr::ConvElements(data, cont) => {
                let d = self.datum(*data)?;
                match &*d.value {
                    DataValue::Null => Expr::Nil(self.result_type(&cont)),
                    DataValue::List(items) => {
                        let nil = Expr::Nil(self.result_type(&cont));
                        items.iter().enumerate().rev().fold(nil, |tail, (i, item)| {
                            let elem = Expr::Data(DataRef::at(item.clone(), format!("{}[{i}]", d.path)));
                            Expr::cons(Expr::App(cont.clone(), b(elem)), tail)
                        })
                    }
                    _ => return Err(stuck(OpKind::ConvElements, &d)),
                }
            }
            Expr::HasShape(s, data) => {
                let d = self.datum(*data)?;
                Expr::data(DataValue::Bool(has_shape(&s, &d.value)))
            }
            Expr::Choose(l) => match *l {
                Expr::Nil(ann) => Expr::Nil(ann.and_then(|t| match t {
                    FooType::Option(inner) => Some(*inner),
                    _ => None,
                })),
                Expr::Cons(h, t) => match *h {
                    Expr::Some(v) => Expr::Cons(v, b(Expr::Choose(t))),
                    Expr::None(_) => Expr::Choose(t),
                    h => return Err(ill(&h)),
                },
                l => return Err(ill(&l)),
            },
            Expr::IntCoerce(d) => {
                let d = self.datum(*d)?;
                match *d.value {
                    DataValue::Float(x) => Expr::data(DataValue::Int(x.trunc() as i64)),
                    DataValue::Int(i) => Expr::data(DataValue::Int(i)),
                    _ => return Err(Halt::Ill(format!("int coercion of {}", d.value))),
                }
            }
            other => return Err(ill(&other)),
        })
    }

    fn datum(&self, e: Expr) -> Result<DataRef, Halt> {
        match e {
            Expr::Data(d) => Ok(d),
            e => Err(Halt::Ill(format!("expected a data value, found `{e}`"))),
        }
    }
}

fn stuck(op: OpKind, d: &DataRef) -> Halt {
    Halt::Stuck(Stuck { op, data: (*d.value).clone(), path: d.path.to_string() })
}

impl fmt::Display for FooValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FooValue::Data(d) => write!(f, "{d}"),
            FooValue::None => f.write_str("None"),
            FooValue::Some(v) => write!(f, "Some({v})"),
            FooValue::Object { class, args } => {
                write!(f, "new {class}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            FooValue::List(items) => {
                f.write_str("[")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
            FooValue::Closure => f.write_str("<fun>"),
        }
    }
}

impl fmt::Display for EvalOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalOutcome::Value(v) => write!(f, "{v}"),
            EvalOutcome::Stuck(s) => write!(f, "stuck: {s}"),
            EvalOutcome::Exn => f.write_str("exn"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foo::{ClassDef, MemberDef};

    fn run(e: Expr) -> EvalOutcome {
        evaluate(&ClassSet::new(), &e, DEFAULT_FUEL).unwrap()
    }

    fn value(d: DataValue) -> EvalOutcome {
        EvalOutcome::Value(FooValue::Data(d))
    }

    #[test]
    fn dynamic_operations() {
        assert_eq!(run(Expr::ConvFloat(b(Expr::data(DataValue::Int(42))))), value(DataValue::Float(42.0)));
        match run(Expr::ConvPrim(Prim::Bool, b(Expr::data(DataValue::Int(42))))) {
            EvalOutcome::Stuck(s) => assert_eq!(s.op, OpKind::ConvPrim),
            other => panic!("{other}"),
        }
        let id = Expr::lam("y", FooType::Data, Expr::var("y"));
        assert_eq!(
            run(Expr::ConvElements(b(Expr::data(DataValue::Null)), b(id.clone()))),
            EvalOutcome::Value(FooValue::List(vec![]))
        );
        let rec = DataValue::record("ν", vec![("a", DataValue::Int(1))]);
        assert_eq!(run(Expr::conv_field("ν", "b", Expr::data(rec), id)), value(DataValue::Null));
    }

    fn person_classes() -> ClassSet {
        let x = || Expr::var("x");
        let mut cs = ClassSet::new();
        cs.insert(ClassDef {
            name: "Person".into(),
            params: vec![("x".into(), FooType::Data)],
            members: vec![
                MemberDef {
                    name: "Age".into(),
                    ty: FooType::option(FooType::Int),
                    body: Expr::conv_field(
                        "•",
                        "age",
                        x(),
                        Expr::lam(
                            "y",
                            FooType::Data,
                            Expr::ConvNull(
                                b(Expr::var("y")),
                                b(Expr::lam("z", FooType::Data, Expr::ConvPrim(Prim::Int, b(Expr::var("z"))))),
                            ),
                        ),
                    ),
                },
                MemberDef {
                    name: "Name".into(),
                    ty: FooType::Text,
                    body: Expr::conv_field(
                        "•",
                        "name",
                        x(),
                        Expr::lam("y", FooType::Data, Expr::ConvPrim(Prim::Text, b(Expr::var("y")))),
                    ),
                },
            ],
        });
        cs
    }

    #[test]
    fn person_members() {
        let cs = person_classes();
        let tomas =
            Expr::New("Person".into(), vec![Expr::data(DataValue::object(vec![("name", DataValue::str("Tomas"))]))]);
        let name = evaluate(&cs, &Expr::member(tomas.clone(), "Name"), DEFAULT_FUEL).unwrap();
        assert_eq!(name, value(DataValue::str("Tomas")));
        let age = evaluate(&cs, &Expr::member(tomas, "Age"), DEFAULT_FUEL).unwrap();
        assert_eq!(age, EvalOutcome::Value(FooValue::None));
    }

    #[test]
    fn stuck_reports_path() {
        let cs = person_classes();
        let bad = Expr::New("Person".into(), vec![Expr::data(DataValue::object(vec![("name", DataValue::Int(3))]))]);
        match evaluate(&cs, &Expr::member(bad, "Name"), DEFAULT_FUEL).unwrap() {
            EvalOutcome::Stuck(s) => {
                assert_eq!(s.path, ".name");
                assert_eq!(s.data, DataValue::Int(3));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn exceptions_propagate() {
        let e = Expr::Some(b(Expr::cons(Expr::Exn, Expr::Nil(None))));
        assert_eq!(run(e), EvalOutcome::Exn);
    }

    #[test]
    fn choose_keeps_somes() {
        let l = Expr::cons(
            Expr::some(Expr::data(DataValue::Int(1))),
            Expr::cons(Expr::None(None), Expr::cons(Expr::some(Expr::data(DataValue::Int(3))), Expr::Nil(None))),
        );
        assert_eq!(
            run(Expr::Choose(b(l))),
            EvalOutcome::Value(FooValue::List(vec![
                FooValue::Data(DataValue::Int(1)),
                FooValue::Data(DataValue::Int(3))
            ]))
        );
    }

    #[test]
    fn fuel_runs_out() {
        let e = Expr::ConvFloat(b(Expr::data(DataValue::Int(1))));
        assert_eq!(evaluate(&ClassSet::new(), &e, 0), Err(EvalError::FuelExhausted(0)));
    }
}
