//! Bidirectional type checking. Primitive data literals synthesize their
//! primitive type and check against either it or `Data`.

use std::fmt;

use thiserror::Error;

use super::{ClassSet, Expr, FooType};
use crate::data::DataValue;

#[derive(Debug, Clone, Error, PartialEq)]
#[error("type error in `{location}`: {message}")]
pub struct TypeError {
    pub location: String,
    pub message: String,
}

/// Typing context: variables in scope, innermost last.
#[derive(Debug, Clone, Default)]
pub struct Env {
    vars: Vec<(String, FooType)>,
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(&self, x: &str, t: FooType) -> Env {
        let mut vars = self.vars.clone();
        vars.push((x.to_string(), t));
        Env { vars }
    }

    pub fn lookup(&self, x: &str) -> Option<&FooType> {
        self.vars.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
    }
}

fn err(e: &Expr, message: impl fmt::Display) -> TypeError {
    let mut location = e.to_string();
    if location.chars().count() > 80 {
        location = location.chars().take(77).collect::<String>() + "...";
    }
    TypeError { location, message: message.to_string() }
}

fn literal_type(d: &DataValue) -> FooType {
    match d {
        DataValue::Int(_) => FooType::Int,
        DataValue::Float(_) => FooType::Float,
        DataValue::Bool(_) => FooType::Bool,
        DataValue::Str(_) => FooType::Text,
        _ => FooType::Data,
    }
}

/// Synthesizes the type of `e`.
pub fn typecheck(classes: &ClassSet, env: &Env, e: &Expr) -> Result<FooType, TypeError> {
    Checker { classes }.synth(env, e)
}

/// Checks `e` against `expected`.
pub fn check_type(classes: &ClassSet, env: &Env, e: &Expr, expected: &FooType) -> Result<(), TypeError> {
    Checker { classes }.check(env, e, expected)
}

/// Checks every member body of every class against its declared type.
pub fn check_classes(classes: &ClassSet) -> Result<(), TypeError> {
    let checker = Checker { classes };
    for class in classes.iter() {
        let env = class.params.iter().fold(Env::new(), |env, (x, t)| env.with(x, t.clone()));
        let mut seen = std::collections::BTreeSet::new();
        for m in &class.members {
            if !seen.insert(&m.name) {
                return Err(TypeError {
                    location: class.name.clone(),
                    message: format!("duplicate member `{}`", m.name),
                });
            }
            checker.well_formed(&m.ty).map_err(|message| TypeError { location: class.name.clone(), message })?;
            checker.check(&env, &m.body, &m.ty)?;
        }
    }
    Ok(())
}

struct Checker<'a> {
    classes: &'a ClassSet,
}

impl Checker<'_> {
    fn well_formed(&self, t: &FooType) -> Result<(), String> {
        match t {
            FooType::Class(c) if !self.classes.contains(c) => Err(format!("unknown class `{c}`")),
            FooType::Arrow(a, r) => self.well_formed(a).and_then(|_| self.well_formed(r)),
            FooType::List(t) | FooType::Option(t) => self.well_formed(t),
            _ => Ok(()),
        }
    }

    fn data_arg(&self, env: &Env, e: &Expr) -> Result<(), TypeError> {
        self.check(env, e, &FooType::Data)
    }

    fn continuation(&self, env: &Env, e: &Expr) -> Result<FooType, TypeError> {
        match self.synth(env, e)? {
            FooType::Arrow(a, r) if *a == FooType::Data => Ok(*r),
            t => Err(err(e, format!("expected a function from Data, found {t}"))),
        }
    }

    fn synth(&self, env: &Env, e: &Expr) -> Result<FooType, TypeError> {
        match e {
            Expr::Data(d) => Ok(literal_type(&d.value)),
            Expr::Var(x) => env.lookup(x).cloned().ok_or_else(|| err(e, format!("unbound variable `{x}`"))),
            Expr::Lam(x, t, body) => {
                self.well_formed(t).map_err(|m| err(e, m))?;
                Ok(FooType::arrow(t.clone(), self.synth(&env.with(x, t.clone()), body)?))
            }
            Expr::App(f, a) => match self.synth(env, f)? {
                FooType::Arrow(p, r) => {
                    self.check(env, a, &p)?;
                    Ok(*r)
                }
                t => Err(err(e, format!("applying a value of type {t}"))),
            },
            Expr::Member(obj, name) => match self.synth(env, obj)? {
                FooType::Class(c) => {
                    let class = self.classes.get(&c).ok_or_else(|| err(e, format!("unknown class `{c}`")))?;
                    class
                        .member(name)
                        .map(|m| m.ty.clone())
                        .ok_or_else(|| err(e, format!("class `{c}` has no member `{name}`")))
                }
                t => Err(err(e, format!("member access on {t}"))),
            },
            Expr::New(c, args) => {
                let class = self.classes.get(c).ok_or_else(|| err(e, format!("unknown class `{c}`")))?;
                if class.params.len() != args.len() {
                    return Err(err(e, format!("`{c}` takes {} arguments", class.params.len())));
                }
                for (a, (_, t)) in args.iter().zip(&class.params) {
                    self.check(env, a, t)?;
                }
                Ok(FooType::Class(c.clone()))
            }
            Expr::None(Some(t)) => Ok(FooType::option(t.clone())),
            Expr::Nil(Some(t)) => Ok(FooType::list(t.clone())),
            Expr::None(None) | Expr::Nil(None) => Err(err(e, "cannot infer the element type")),
            Expr::Exn => Err(err(e, "cannot infer the type of an exception")),
            Expr::Some(v) => Ok(FooType::option(self.synth(env, v)?)),
            Expr::MatchOption { scrutinee, var, some, none } => match self.synth(env, scrutinee)? {
                FooType::Option(t) => {
                    let env_some = env.with(var, *t);
                    self.synth_branches(env, (&env_some, some), (env, none))
                }
                t => Err(err(e, format!("matching on {t} as an option"))),
            },
            Expr::MatchList { scrutinee, head, tail, cons, nil } => match self.synth(env, scrutinee)? {
                FooType::List(t) => {
                    let env_cons = env.with(head, (*t).clone()).with(tail, FooType::List(t));
                    self.synth_branches(env, (&env_cons, cons), (env, nil))
                }
                t => Err(err(e, format!("matching on {t} as a list"))),
            },
            Expr::Eq(x, y) => {
                let t = match self.synth(env, x) {
                    Ok(t) => {
                        self.check(env, y, &t)?;
                        t
                    }
                    Err(first) => {
                        let t = self.synth(env, y).map_err(|_| first)?;
                        self.check(env, x, &t)?;
                        t
                    }
                };
                if t.contains_arrow() {
                    return Err(err(e, "functions cannot be compared"));
                }
                Ok(FooType::Bool)
            }
            Expr::If(c, t, f) => {
                self.check(env, c, &FooType::Bool)?;
                self.synth_branches(env, (env, t), (env, f))
            }
            Expr::Cons(h, t) => match self.synth(env, h) {
                Ok(th) => {
                    let lt = FooType::list(th);
                    self.check(env, t, &lt)?;
                    Ok(lt)
                }
                Err(first) => match self.synth(env, t) {
                    Ok(lt @ FooType::List(_)) => {
                        let FooType::List(th) = &lt else { unreachable!() };
                        self.check(env, h, th)?;
                        Ok(lt)
                    }
                    _ => Err(first),
                },
            },
            Expr::ConvFloat(d) => {
                self.data_arg(env, d)?;
                Ok(FooType::Float)
            }
            Expr::ConvPrim(p, d) => {
                self.data_arg(env, d)?;
                Ok(p.foo_type())
            }
            Expr::ConvField { data, cont, .. } => {
                self.data_arg(env, data)?;
                self.continuation(env, cont)
            }
            Expr::ConvNull(d, cont) => {
                self.data_arg(env, d)?;
                Ok(FooType::option(self.continuation(env, cont)?))
            }
            Expr::ConvElements(d, cont) => {
                self.data_arg(env, d)?;
                Ok(FooType::list(self.continuation(env, cont)?))
            }
            Expr::HasShape(_, d) => {
                self.data_arg(env, d)?;
                Ok(FooType::Bool)
            }
            Expr::Choose(l) => match self.synth(env, l)? {
                FooType::List(t) => match *t {
                    FooType::Option(inner) => Ok(FooType::List(inner)),
                    t => Err(err(e, format!("choose over list<{t}>"))),
                },
                t => Err(err(e, format!("choose over {t}"))),
            },
            Expr::IntCoerce(x) => {
                self.check(env, x, &FooType::Float)?;
                Ok(FooType::Int)
            }
        }
    }

    /// Two branches of a conditional: synthesize one, check the other.
    fn synth_branches(&self, _env: &Env, a: (&Env, &Expr), c: (&Env, &Expr)) -> Result<FooType, TypeError> {
        match self.synth(a.0, a.1) {
            Ok(t) => {
                self.check(c.0, c.1, &t)?;
                Ok(t)
            }
            Err(first) => {
                let t = self.synth(c.0, c.1).map_err(|_| first)?;
                self.check(a.0, a.1, &t)?;
                Ok(t)
            }
        }
    }

    fn check(&self, env: &Env, e: &Expr, expected: &FooType) -> Result<(), TypeError> {
        let mismatch = |found: &FooType| err(e, format!("expected {expected}, found {found}"));
        if e.raises() {
            // About to raise: like `exn` itself, it has every type.
            return Ok(());
        }
        match (e, expected) {
            (Expr::Data(_), FooType::Data) => Ok(()),
            (Expr::None(ann), FooType::Option(t)) | (Expr::Nil(ann), FooType::List(t)) => match ann {
                Some(a) if a != &**t => Err(mismatch(&FooType::option(a.clone()))),
                _ => self.well_formed(t).map_err(|m| err(e, m)),
            },
            (Expr::Some(v), FooType::Option(t)) => self.check(env, v, t),
            (Expr::Cons(h, tl), FooType::List(t)) => {
                self.check(env, h, t)?;
                self.check(env, tl, expected)
            }
            (Expr::Lam(x, t, body), FooType::Arrow(p, r)) => {
                if t != &**p {
                    return Err(err(e, format!("parameter has type {t}, expected {p}")));
                }
                self.check(&env.with(x, t.clone()), body, r)
            }
            (Expr::If(c, t, f), _) => {
                self.check(env, c, &FooType::Bool)?;
                self.check(env, t, expected)?;
                self.check(env, f, expected)
            }
            (Expr::MatchOption { scrutinee, var, some, none }, _) => match self.synth(env, scrutinee)? {
                FooType::Option(t) => {
                    self.check(&env.with(var, *t), some, expected)?;
                    self.check(env, none, expected)
                }
                t => Err(err(e, format!("matching on {t} as an option"))),
            },
            (Expr::MatchList { scrutinee, head, tail, cons, nil }, _) => match self.synth(env, scrutinee)? {
                FooType::List(t) => {
                    let env_cons = env.with(head, (*t).clone()).with(tail, FooType::List(t));
                    self.check(&env_cons, cons, expected)?;
                    self.check(env, nil, expected)
                }
                t => Err(err(e, format!("matching on {t} as a list"))),
            },
            (Expr::ConvField { data, cont, .. }, _) => {
                self.data_arg(env, data)?;
                self.check(env, cont, &FooType::arrow(FooType::Data, expected.clone()))
            }
            (Expr::ConvNull(d, cont), FooType::Option(t)) | (Expr::ConvElements(d, cont), FooType::List(t)) => {
                self.data_arg(env, d)?;
                self.check(env, cont, &FooType::arrow(FooType::Data, (**t).clone()))
            }
            (Expr::Choose(l), FooType::List(t)) => self.check(env, l, &FooType::list(FooType::option((**t).clone()))),
            _ => {
                let found = self.synth(env, e)?;
                if &found == expected {
                    Ok(())
                } else {
                    Err(mismatch(&found))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foo::{ClassDef, MemberDef, Prim};

    fn data_env() -> Env {
        Env::new().with("x", FooType::Data)
    }

    #[test]
    fn conversions() {
        let cs = ClassSet::new();
        let e = Expr::ConvPrim(Prim::Text, Box::new(Expr::var("x")));
        assert_eq!(typecheck(&cs, &data_env(), &e), Ok(FooType::Text));
        let e = Expr::ConvNull(
            Box::new(Expr::var("x")),
            Box::new(Expr::lam("y", FooType::Data, Expr::ConvPrim(Prim::Int, Box::new(Expr::var("y"))))),
        );
        assert_eq!(typecheck(&cs, &data_env(), &e), Ok(FooType::option(FooType::Int)));
    }

    #[test]
    fn literals_check_as_data_or_primitive() {
        let cs = ClassSet::new();
        let five = Expr::data(DataValue::Int(5));
        assert_eq!(typecheck(&cs, &Env::new(), &five), Ok(FooType::Int));
        assert!(check_type(&cs, &Env::new(), &five, &FooType::Data).is_ok());
        assert!(check_type(&cs, &Env::new(), &five, &FooType::Float).is_err());
        let conv = Expr::ConvFloat(Box::new(five));
        assert_eq!(typecheck(&cs, &Env::new(), &conv), Ok(FooType::Float));
    }

    #[test]
    fn unknown_members_and_classes() {
        let mut cs = ClassSet::new();
        cs.insert(ClassDef {
            name: "P".into(),
            params: vec![("x".into(), FooType::Data)],
            members: vec![MemberDef {
                name: "Name".into(),
                ty: FooType::Text,
                body: Expr::ConvPrim(Prim::Text, Box::new(Expr::var("x"))),
            }],
        });
        assert!(check_classes(&cs).is_ok());
        let obj = Expr::New("P".into(), vec![Expr::data(DataValue::Null)]);
        assert_eq!(typecheck(&cs, &Env::new(), &Expr::member(obj.clone(), "Name")), Ok(FooType::Text));
        assert!(typecheck(&cs, &Env::new(), &Expr::member(obj, "Age")).is_err());
        let ghost = Expr::member(Expr::New("Q".into(), vec![]), "Name");
        assert!(typecheck(&cs, &Env::new(), &ghost).is_err());
    }

    #[test]
    fn annotations_and_exceptions() {
        let cs = ClassSet::new();
        let unwrap = Expr::match_option(Expr::None(Some(FooType::Int)), "v", Expr::var("v"), Expr::Exn);
        assert_eq!(typecheck(&cs, &Env::new(), &unwrap), Ok(FooType::Int));
        assert!(typecheck(&cs, &Env::new(), &Expr::Nil(None)).is_err());
        assert!(check_type(&cs, &Env::new(), &Expr::Nil(None), &FooType::list(FooType::Bool)).is_ok());
        let eq = Expr::Eq(
            Box::new(Expr::lam("z", FooType::Int, Expr::var("z"))),
            Box::new(Expr::lam("z", FooType::Int, Expr::var("z"))),
        );
        assert!(typecheck(&cs, &Env::new(), &eq).is_err());
    }
}
