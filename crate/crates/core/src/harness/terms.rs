//! Random well-typed Foo programs over provided types, for checking type
//! preservation and progress step by step.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::gen::{random_value, value_of_shape, TrialRng};
use crate::data::{DataValue, BULLET};
use crate::foo::{b, check_type, normalize, ClassSet, Env, EvalError, Expr, FooType, Prim};
use crate::provider::Provided;
use crate::shapes::Shape;

pub struct TermGen<'a> {
    rng: &'a mut TrialRng,
    /// Closed expressions reachable from the converted input by member
    /// access, with their types.
    access: Vec<(Expr, FooType)>,
    types: Vec<FooType>,
    vars: usize,
}

const PRIMS: [FooType; 4] = [FooType::Int, FooType::Float, FooType::Bool, FooType::Text];

fn access_paths(classes: &ClassSet, root: Expr, ty: FooType, limit: usize) -> Vec<(Expr, FooType)> {
    let mut out = vec![(root, ty)];
    let mut i = 0;
    while i < out.len() && out.len() < limit {
        if let FooType::Class(c) = &out[i].1 {
            if let Some(def) = classes.get(c) {
                let base = out[i].0.clone();
                for m in &def.members {
                    out.push((Expr::member(base.clone(), &m.name), m.ty.clone()));
                }
            }
        }
        i += 1;
    }
    out.truncate(limit);
    out
}

impl<'a> TermGen<'a> {
    pub fn new(rng: &'a mut TrialRng, p: &Provided, input: DataValue) -> Self {
        let access = access_paths(&p.classes, p.apply(input), p.root_type.clone(), 40);
        let mut types: Vec<FooType> = PRIMS.to_vec();
        types.push(FooType::Data);
        for (_, t) in &access {
            if !types.contains(t) {
                types.push(t.clone());
            }
        }
        TermGen { rng, access, types, vars: 0 }
    }

    fn fresh(&mut self) -> String {
        self.vars += 1;
        format!("v{}", self.vars)
    }

    pub fn random_type(&mut self) -> FooType {
        let t = self.types.choose(self.rng).unwrap().clone();
        match self.rng.gen_range(0..8) {
            0 => FooType::option(t),
            1 => FooType::list(t),
            _ => t,
        }
    }

    /// A type for positions whose type is synthesized. Data literals
    /// synthesize their primitive type, so `Data` is left out.
    fn synth_type(&mut self) -> FooType {
        loop {
            let t = self.random_type();
            if !mentions_data(&t) {
                return t;
            }
        }
    }

    /// A data literal that `convPrim(p, ·)` reads.
    fn prim_literal(&mut self, p: Prim) -> DataValue {
        let shape = match p {
            Prim::Int => Shape::Int,
            Prim::Float => Shape::Float,
            Prim::Bool => Shape::Bool,
            Prim::Text => Shape::Text,
        };
        match (p, self.rng.gen_range(0..4)) {
            (Prim::Int, 0) => DataValue::str("42"),
            (Prim::Float, 0) => DataValue::str("2.5"),
            (Prim::Bool, 0) => DataValue::str("1"),
            _ => value_of_shape(self.rng, &shape).unwrap(),
        }
    }

    fn literal(&mut self, ty: &FooType) -> Option<Expr> {
        let d = match ty {
            FooType::Int => DataValue::Int(self.rng.gen_range(-3..10)),
            FooType::Float => DataValue::Float(f64::from(self.rng.gen_range(-6..20)) / 4.0),
            FooType::Bool => DataValue::Bool(self.rng.gen()),
            FooType::Text => DataValue::str(["a", "b", "Jan"].choose(self.rng).unwrap().to_string()),
            FooType::Data => random_value(self.rng, 2),
            _ => return None,
        };
        Some(Expr::data(d))
    }

    fn leaf(&mut self, ty: &FooType, env: &[(String, FooType)]) -> Expr {
        let mut options: Vec<Expr> = env.iter().filter(|(_, t)| t == ty).map(|(x, _)| Expr::var(x)).collect();
        options.extend(self.access.iter().filter(|(_, t)| t == ty).map(|(e, _)| e.clone()));
        if let Some(e) = options.choose(self.rng) {
            if self.rng.gen_bool(0.7) {
                return e.clone();
            }
        }
        if let Some(e) = self.literal(ty) {
            return e;
        }
        match ty {
            FooType::Option(t) => Expr::None(Some((**t).clone())),
            FooType::List(t) => Expr::Nil(Some((**t).clone())),
            FooType::Arrow(a, r) => {
                let x = self.fresh();
                let env = extend(env, &x, a);
                Expr::lam(&x, (**a).clone(), self.leaf(r, &env))
            }
            _ => options.choose(self.rng).cloned().unwrap_or(Expr::Exn),
        }
    }

    /// A closed-under-`env` expression of type `ty` with roughly `size` nodes.
    pub fn gen(&mut self, ty: &FooType, env: &[(String, FooType)], size: usize) -> Expr {
        if size <= 1 {
            return self.leaf(ty, env);
        }
        let half = size / 2;
        match self.rng.gen_range(0..12) {
            0 => Expr::if_(self.gen(&FooType::Bool, env, half), self.gen(ty, env, half), self.gen(ty, env, half)),
            1 => {
                let a = self.random_type();
                let x = self.fresh();
                let body = ascribe(self.gen(ty, &extend(env, &x, &a), half), ty);
                Expr::app(Expr::lam(&x, a.clone(), body), self.gen(&a, env, half))
            }
            2 => {
                let a = self.synth_type();
                let y = self.fresh();
                let scrutinee = ascribe(self.gen(&FooType::option(a.clone()), env, half), &FooType::option(a.clone()));
                let some = self.gen(ty, &extend(env, &y, &a), half);
                Expr::match_option(scrutinee, &y, some, self.gen(ty, env, half))
            }
            3 => {
                let a = self.synth_type();
                let (h, t) = (self.fresh(), self.fresh());
                let scrutinee = ascribe(self.gen(&FooType::list(a.clone()), env, half), &FooType::list(a.clone()));
                let inner = extend(&extend(env, &h, &a), &t, &FooType::list(a.clone()));
                let cons = self.gen(ty, &inner, half);
                Expr::match_list(scrutinee, &h, &t, cons, self.gen(ty, env, half))
            }
            4 => {
                let field = ["a", "b"].choose(self.rng).unwrap().to_string();
                let record = DataValue::record(BULLET, vec![(field.as_str(), random_value(self.rng, 1))]);
                let cont = self.continuation(ty, env, half);
                Expr::ConvField { record: BULLET.into(), field, data: b(Expr::data(record)), cont: b(cont) }
            }
            5 if self.rng.gen_bool(0.05) => Expr::Exn,
            _ => self.intro(ty, env, size),
        }
    }

    /// `λy:Data. e` with a synthesizable body, so that reduction can
    /// annotate the `None` or `nil` it produces from `null`.
    fn continuation(&mut self, ty: &FooType, env: &[(String, FooType)], size: usize) -> Expr {
        let y = self.fresh();
        let body = self.gen(ty, &extend(env, &y, &FooType::Data), size);
        Expr::lam(&y, FooType::Data, ascribe(body, ty))
    }

    fn intro(&mut self, ty: &FooType, env: &[(String, FooType)], size: usize) -> Expr {
        let half = size / 2;
        match ty {
            FooType::Option(t) => match self.rng.gen_range(0..3) {
                0 => Expr::some(self.gen(t, env, half)),
                1 => {
                    let d = if self.rng.gen_bool(0.4) { DataValue::Null } else { random_value(self.rng, 1) };
                    let cont = self.continuation(t, env, half);
                    Expr::ConvNull(b(Expr::data(d)), b(cont))
                }
                _ => self.leaf(ty, env),
            },
            FooType::List(t) => match self.rng.gen_range(0..4) {
                0 => Expr::cons(self.gen(t, env, half), self.gen(ty, env, half)),
                1 => {
                    let n = self.rng.gen_range(0..3);
                    let d = if self.rng.gen_bool(0.2) {
                        DataValue::Null
                    } else {
                        DataValue::List((0..n).map(|_| random_value(self.rng, 1)).collect())
                    };
                    let cont = self.continuation(t, env, half);
                    Expr::ConvElements(b(Expr::data(d)), b(cont))
                }
                2 => Expr::Choose(b(self.gen(&FooType::list(FooType::option((**t).clone())), env, half))),
                _ => self.leaf(ty, env),
            },
            FooType::Bool => match self.rng.gen_range(0..4) {
                0 => {
                    let t = self.synth_type();
                    Expr::Eq(b(ascribe(self.gen(&t, env, half), &t)), b(self.gen(&t, env, half)))
                }
                1 => {
                    let s = [Shape::Int, Shape::Text, Shape::nullable(Shape::Float), Shape::list(Shape::Bool)]
                        .choose(self.rng)
                        .unwrap()
                        .clone();
                    Expr::HasShape(Arc::new(s), b(self.gen(&FooType::Data, env, half)))
                }
                2 => Expr::ConvPrim(Prim::Bool, b(Expr::data(self.prim_literal(Prim::Bool)))),
                _ => self.leaf(ty, env),
            },
            FooType::Int => match self.rng.gen_range(0..3) {
                0 => Expr::IntCoerce(b(self.gen(&FooType::Float, env, half))),
                1 => Expr::ConvPrim(Prim::Int, b(Expr::data(self.prim_literal(Prim::Int)))),
                _ => self.leaf(ty, env),
            },
            FooType::Float => match self.rng.gen_range(0..3) {
                0 => Expr::ConvFloat(b(Expr::data(self.prim_literal(Prim::Float)))),
                1 => Expr::ConvPrim(Prim::Float, b(Expr::data(self.prim_literal(Prim::Float)))),
                _ => self.leaf(ty, env),
            },
            FooType::Text if self.rng.gen() => Expr::ConvPrim(Prim::Text, b(Expr::data(self.prim_literal(Prim::Text)))),
            FooType::Arrow(a, r) => {
                let x = self.fresh();
                let body = self.gen(r, &extend(env, &x, a), half);
                Expr::lam(&x, (**a).clone(), body)
            }
            _ => self.leaf(ty, env),
        }
    }
}

/// `(λa:τ. a) e`: fixes the type of `e` where it would otherwise be
/// synthesized.
fn ascribe(e: Expr, ty: &FooType) -> Expr {
    Expr::app(Expr::lam("a", ty.clone(), Expr::var("a")), e)
}

fn mentions_data(t: &FooType) -> bool {
    match t {
        FooType::Data | FooType::Arrow(..) => true,
        FooType::List(t) | FooType::Option(t) => mentions_data(t),
        _ => false,
    }
}

fn extend(env: &[(String, FooType)], x: &str, t: &FooType) -> Vec<(String, FooType)> {
    let mut out = env.to_vec();
    out.push((x.to_string(), t.clone()));
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum TermOutcome {
    Value { steps: usize },
    Exn { steps: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum TermViolation {
    /// The generator produced an ill-typed term; a harness bug.
    IllTyped(String),
    /// A reduct no longer has the original type.
    Preservation {
        step: usize,
        message: String,
    },
    Stuck(String),
    NoProgress(String),
}

/// Reduces `e : ty` to a value or exception, type checking every reduct.
pub fn check_preservation(classes: &ClassSet, e: &Expr, ty: &FooType, fuel: u64) -> Result<TermOutcome, TermViolation> {
    check_type(classes, &Env::new(), e, ty).map_err(|err| TermViolation::IllTyped(format!("{err}")))?;
    let mut steps = 0;
    let mut broken = None;
    let result = normalize(classes, e, fuel, |next| {
        steps += 1;
        if broken.is_none() {
            if let Err(err) = check_type(classes, &Env::new(), next, ty) {
                broken = Some(TermViolation::Preservation { step: steps, message: err.to_string() });
            }
        }
    });
    if let Some(v) = broken {
        return Err(v);
    }
    match result {
        Ok(Ok(Expr::Exn)) => Ok(TermOutcome::Exn { steps }),
        Ok(Ok(_)) => Ok(TermOutcome::Value { steps }),
        Ok(Err(stuck)) => Err(TermViolation::Stuck(stuck.to_string())),
        Err(e @ (EvalError::FuelExhausted(_) | EvalError::IllFormed(_))) => {
            Err(TermViolation::NoProgress(e.to_string()))
        }
    }
}
