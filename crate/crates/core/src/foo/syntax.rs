//! Surface syntax printer for expressions and classes.

use std::fmt;

use super::{ClassDef, ClassSet, Expr};

fn atomic(e: &Expr) -> bool {
    !matches!(
        e,
        Expr::Lam(..)
            | Expr::App(..)
            | Expr::Eq(..)
            | Expr::If(..)
            | Expr::Cons(..)
            | Expr::MatchOption { .. }
            | Expr::MatchList { .. }
    )
}

struct Operand<'a>(&'a Expr);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if atomic(self.0) {
            write!(f, "{}", self.0)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Data(d) => write!(f, "{}", d.value),
            Expr::Var(x) => f.write_str(x),
            Expr::Lam(x, t, body) => write!(f, "λ{x}:{t}. {body}"),
            Expr::App(g, a) => write!(f, "{} {}", Operand(g), Operand(a)),
            Expr::Member(o, n) => write!(f, "{}.{n}", Operand(o)),
            Expr::New(c, args) => {
                write!(f, "new {c}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Expr::None(_) => f.write_str("None"),
            Expr::Some(v) => write!(f, "Some({v})"),
            Expr::MatchOption { scrutinee, var, some, none } => {
                write!(f, "match {scrutinee} with Some({var}) -> {} | None -> {}", Operand(some), Operand(none))
            }
            Expr::Eq(x, y) => write!(f, "{} = {}", Operand(x), Operand(y)),
            Expr::If(c, t, e) => write!(f, "if {c} then {t} else {e}"),
            Expr::Nil(_) => f.write_str("nil"),
            Expr::Cons(h, t) => {
                let tail = if matches!(**t, Expr::Cons(..)) { t.to_string() } else { Operand(t).to_string() };
                write!(f, "{} :: {tail}", Operand(h))
            }
            Expr::MatchList { scrutinee, head, tail, cons, nil } => {
                write!(f, "match {scrutinee} with {head}::{tail} -> {} | nil -> {}", Operand(cons), Operand(nil))
            }
            Expr::ConvFloat(d) => write!(f, "convFloat(float, {d})"),
            Expr::ConvPrim(p, d) => write!(f, "convPrim({p}, {d})"),
            Expr::ConvField { record, field, data, cont } => write!(f, "convField({record}, {field}, {data}, {cont})"),
            Expr::ConvNull(d, c) => write!(f, "convNull({d}, {c})"),
            Expr::ConvElements(d, c) => write!(f, "convElements({d}, {c})"),
            Expr::HasShape(s, d) => write!(f, "hasShape({s}, {d})"),
            Expr::Choose(l) => write!(f, "choose({l})"),
            Expr::Exn => f.write_str("exn"),
            Expr::IntCoerce(d) => write!(f, "int({d})"),
        }
    }
}

impl fmt::Display for ClassDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type {}(", self.name)?;
        for (i, (x, t)) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}: {t}")?;
        }
        f.write_str(") =")?;
        if self.members.is_empty() {
            return Ok(());
        }
        for m in &self.members {
            write!(f, "\n  member {} : {} = {}", m.name, m.ty, m.body)?;
        }
        Ok(())
    }
}

impl fmt::Display for ClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                f.write_str("\n\n")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::DataValue;
    use crate::foo::{b, FooType, MemberDef, Prim};

    #[test]
    fn expressions() {
        let e = Expr::conv_field(
            "•",
            "name",
            Expr::var("x"),
            Expr::lam("y", FooType::Data, Expr::ConvPrim(Prim::Text, b(Expr::var("y")))),
        );
        assert_eq!(e.to_string(), "convField(•, name, x, λy:Data. convPrim(string, y))");
        let l = Expr::cons(Expr::data(DataValue::Int(1)), Expr::cons(Expr::data(DataValue::Int(2)), Expr::Nil(None)));
        assert_eq!(l.to_string(), "1 :: 2 :: nil");
        let m = Expr::member(Expr::app(Expr::var("f"), Expr::var("x")), "Age");
        assert_eq!(m.to_string(), "(f x).Age");
    }

    #[test]
    fn classes() {
        let c = ClassDef {
            name: "Person".into(),
            params: vec![("x".into(), FooType::Data)],
            members: vec![MemberDef { name: "Raw".into(), ty: FooType::Data, body: Expr::var("x") }],
        };
        assert_eq!(c.to_string(), "type Person(x: Data) =\n  member Raw : Data = x");
    }
}
