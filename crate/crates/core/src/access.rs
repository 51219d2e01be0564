//! Member access paths such as `Main.Temp` or `[1].Age`, compiled to Foo
//! expressions over a provided type.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::data::DataValue;
use crate::foo::{evaluate, EvalError, EvalOutcome, Expr, FooType};
use crate::provider::Provided;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PathStep {
    Member(String),
    Index(usize),
    /// Unwraps an option, raising an exception on `None`.
    Unwrap,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AccessPath(pub Vec<PathStep>);

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AccessError {
    #[error("cannot parse access path `{0}`")]
    Parse(String),
    #[error("`{class}` has no member `{member}`{}", suggest(.suggestions))]
    UnknownMember { class: String, member: String, suggestions: Vec<String> },
    #[error("cannot apply `{step}` to a value of type {ty}")]
    Mismatch { step: String, ty: FooType },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

fn suggest(names: &[String]) -> String {
    if names.is_empty() {
        String::new()
    } else {
        format!("; did you mean {}?", names.iter().map(|n| format!("`{n}`")).collect::<Vec<_>>().join(", "))
    }
}

impl FromStr for AccessPath {
    type Err = AccessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AccessError::Parse(s.to_string());
        let mut steps = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            if let Some(r) = rest.strip_prefix('[') {
                let end = r.find(']').ok_or_else(bad)?;
                steps.push(PathStep::Index(r[..end].trim().parse().map_err(|_| bad())?));
                rest = &r[end + 1..];
            } else if let Some(r) = rest.strip_prefix('!') {
                steps.push(PathStep::Unwrap);
                rest = r;
            } else {
                let r = rest.strip_prefix('.').unwrap_or(rest);
                if !steps.is_empty() && r.len() == rest.len() {
                    return Err(bad());
                }
                let end = r.find(['.', '[', '!']).unwrap_or(r.len());
                let name = r[..end].trim();
                if name.is_empty() {
                    return Err(bad());
                }
                steps.push(PathStep::Member(name.to_string()));
                rest = &r[end..];
            }
        }
        if steps.is_empty() {
            return Err(bad());
        }
        Ok(AccessPath(steps))
    }
}

impl fmt::Display for PathStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathStep::Member(n) => write!(f, ".{n}"),
            PathStep::Index(i) => write!(f, "[{i}]"),
            PathStep::Unwrap => f.write_str("!"),
        }
    }
}

impl fmt::Display for AccessPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            match s {
                PathStep::Member(n) if i == 0 => f.write_str(n)?,
                s => write!(f, "{s}")?,
            }
        }
        Ok(())
    }
}

fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.to_lowercase().chars().collect();
    let b: Vec<char> = b.to_lowercase().chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut cur = vec![i + 1];
        for (j, cb) in b.iter().enumerate() {
            cur.push((prev[j] + usize::from(ca != cb)).min(prev[j + 1] + 1).min(cur[j] + 1));
        }
        prev = cur;
    }
    prev[b.len()]
}

struct Builder<'a> {
    p: &'a Provided,
    vars: usize,
}

impl Builder<'_> {
    fn fresh(&mut self) -> String {
        self.vars += 1;
        format!("p{}", self.vars)
    }

    fn member_name(&self, class: &str, wanted: &str) -> Result<String, AccessError> {
        let def = self
            .p
            .classes
            .get(class)
            .ok_or_else(|| AccessError::Mismatch { step: format!(".{wanted}"), ty: FooType::class(class) })?;
        if def.member(wanted).is_some() {
            return Ok(wanted.to_string());
        }
        let by_origin = def.members.iter().find(|m| self.p.original_name(class, &m.name) == Some(wanted));
        let by_case = def.members.iter().find(|m| m.name.eq_ignore_ascii_case(wanted));
        if let Some(m) = by_origin.or(by_case) {
            return Ok(m.name.clone());
        }
        let mut close: Vec<(usize, &str)> = def
            .members
            .iter()
            .map(|m| (edit_distance(&m.name, wanted), m.name.as_str()))
            .filter(|(d, _)| *d <= 3)
            .collect();
        close.sort();
        let mut suggestions: Vec<String> = close.into_iter().map(|(_, n)| n.to_string()).collect();
        if suggestions.is_empty() {
            suggestions = def.members.iter().map(|m| m.name.clone()).collect();
        }
        Err(AccessError::UnknownMember { class: class.to_string(), member: wanted.to_string(), suggestions })
    }

    fn nth(&mut self, e: Expr, i: usize) -> Expr {
        let (h, t) = (self.fresh(), self.fresh());
        let hit = if i == 0 { Expr::var(&h) } else { self.nth(Expr::var(&t), i - 1) };
        Expr::match_list(e, &h, &t, hit, Expr::Exn)
    }

    fn step(&mut self, e: Expr, ty: &FooType, step: &PathStep) -> Result<(Expr, FooType), AccessError> {
        match (step, ty) {
            (PathStep::Member(n), FooType::Class(c)) => {
                let name = self.member_name(c, n)?;
                let member_ty = self.p.classes.get(c).and_then(|d| d.member(&name)).map(|m| m.ty.clone()).unwrap();
                Ok((Expr::member(e, &name), member_ty))
            }
            (PathStep::Index(i), FooType::List(t)) => Ok((self.nth(e, *i), (**t).clone())),
            (PathStep::Unwrap, FooType::Option(t)) => {
                let y = self.fresh();
                Ok((Expr::match_option(e, &y, Expr::var(&y), Expr::Exn), (**t).clone()))
            }
            (PathStep::Member(_) | PathStep::Index(_), FooType::Option(inner)) => {
                let y = self.fresh();
                let (body, t) = self.step(Expr::var(&y), inner, step)?;
                Ok(match t {
                    FooType::Option(t) => {
                        (Expr::match_option(e, &y, body, Expr::None(Some((*t).clone()))), FooType::Option(t))
                    }
                    t => (Expr::match_option(e, &y, Expr::some(body), Expr::None(Some(t.clone()))), FooType::option(t)),
                })
            }
            _ => Err(AccessError::Mismatch { step: step.to_string(), ty: ty.clone() }),
        }
    }
}

/// Builds the expression reading `path` from `e` of type `ty`.
pub fn build_access(p: &Provided, e: Expr, ty: &FooType, path: &AccessPath) -> Result<(Expr, FooType), AccessError> {
    let mut b = Builder { p, vars: 0 };
    let mut cur = (e, ty.clone());
    for s in &path.0 {
        cur = b.step(cur.0, &cur.1, s)?;
    }
    Ok(cur)
}

/// Converts `d` through the provided type and evaluates `path` on it.
pub fn eval_path(p: &Provided, d: DataValue, path: &AccessPath, fuel: u64) -> Result<EvalOutcome, AccessError> {
    let (e, _) = build_access(p, p.apply(d), &p.root_type, path)?;
    Ok(evaluate(&p.classes, &e, fuel)?)
}
