//! Foo: a small simply typed calculus with classes, options and lists, plus
//! the dynamic operations that read untyped data.

mod dynamic;
mod reduce;
mod syntax;
mod typing;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::data::DataValue;
use crate::shapes::Shape;

pub use self::dynamic::{conv_float, conv_prim, has_shape};
pub use self::reduce::{
    evaluate, evaluate_traced, normalize, reduce_step, EvalError, EvalOutcome, FooValue, Step, Stuck, DEFAULT_FUEL,
};
pub use self::typing::{check_classes, check_type, typecheck, Env, TypeError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FooType {
    Int,
    Float,
    Bool,
    Text,
    Data,
    Class(String),
    Arrow(Box<FooType>, Box<FooType>),
    List(Box<FooType>),
    Option(Box<FooType>),
}

impl FooType {
    pub fn arrow(a: FooType, b: FooType) -> FooType {
        FooType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn list(t: FooType) -> FooType {
        FooType::List(Box::new(t))
    }

    pub fn option(t: FooType) -> FooType {
        FooType::Option(Box::new(t))
    }

    pub fn class(name: impl Into<String>) -> FooType {
        FooType::Class(name.into())
    }

    fn contains_arrow(&self) -> bool {
        match self {
            FooType::Arrow(..) => true,
            FooType::List(t) | FooType::Option(t) => t.contains_arrow(),
            _ => false,
        }
    }
}

/// Target of `convPrim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Prim {
    Int,
    Float,
    Bool,
    Text,
}

impl Prim {
    pub fn foo_type(self) -> FooType {
        match self {
            Prim::Int => FooType::Int,
            Prim::Float => FooType::Float,
            Prim::Bool => FooType::Bool,
            Prim::Text => FooType::Text,
        }
    }
}

/// The dynamic data operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    ConvFloat,
    ConvPrim,
    ConvField,
    ConvNull,
    ConvElements,
    HasShape,
}

/// A data literal together with where it was read from, e.g. `.main.temp`.
#[derive(Debug, Clone)]
pub struct DataRef {
    pub value: Arc<DataValue>,
    pub path: Arc<str>,
}

impl DataRef {
    pub fn root(value: DataValue) -> Self {
        DataRef { value: Arc::new(value), path: Arc::from("") }
    }

    pub fn at(value: DataValue, path: impl Into<Arc<str>>) -> Self {
        DataRef { value: Arc::new(value), path: path.into() }
    }
}

#[derive(Debug, Clone, Default)]
pub enum Expr {
    Data(DataRef),
    Var(String),
    Lam(String, FooType, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Member(Box<Expr>, String),
    New(String, Vec<Expr>),
    /// `None`, optionally annotated with the element type.
    None(Option<FooType>),
    Some(Box<Expr>),
    MatchOption {
        scrutinee: Box<Expr>,
        var: String,
        some: Box<Expr>,
        none: Box<Expr>,
    },
    Eq(Box<Expr>, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    /// `nil`, optionally annotated with the element type.
    Nil(Option<FooType>),
    Cons(Box<Expr>, Box<Expr>),
    MatchList {
        scrutinee: Box<Expr>,
        head: String,
        tail: String,
        cons: Box<Expr>,
        nil: Box<Expr>,
    },
    ConvFloat(Box<Expr>),
    ConvPrim(Prim, Box<Expr>),
    ConvField {
        record: String,
        field: String,
        data: Box<Expr>,
        cont: Box<Expr>,
    },
    ConvNull(Box<Expr>, Box<Expr>),
    ConvElements(Box<Expr>, Box<Expr>),
    HasShape(Arc<Shape>, Box<Expr>),
    /// Keeps the `Some` elements of a list of options.
    Choose(Box<Expr>),
    /// A runtime exception; it has every type.
    #[default]
    Exn,
    /// Truncates a float to an int.
    IntCoerce(Box<Expr>),
}

pub fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

impl Expr {
    pub fn data(d: DataValue) -> Expr {
        Expr::Data(DataRef::root(d))
    }

    pub fn var(x: &str) -> Expr {
        Expr::Var(x.to_string())
    }

    pub fn lam(x: &str, ty: FooType, body: Expr) -> Expr {
        Expr::Lam(x.to_string(), ty, b(body))
    }

    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(b(f), b(a))
    }

    pub fn member(e: Expr, name: &str) -> Expr {
        Expr::Member(b(e), name.to_string())
    }

    pub fn some(e: Expr) -> Expr {
        Expr::Some(b(e))
    }

    pub fn cons(h: Expr, t: Expr) -> Expr {
        Expr::Cons(b(h), b(t))
    }

    pub fn if_(c: Expr, t: Expr, f: Expr) -> Expr {
        Expr::If(b(c), b(t), b(f))
    }

    pub fn match_option(scrutinee: Expr, var: &str, some: Expr, none: Expr) -> Expr {
        Expr::MatchOption { scrutinee: b(scrutinee), var: var.to_string(), some: b(some), none: b(none) }
    }

    pub fn match_list(scrutinee: Expr, head: &str, tail: &str, cons: Expr, nil: Expr) -> Expr {
        Expr::MatchList {
            scrutinee: b(scrutinee),
            head: head.to_string(),
            tail: tail.to_string(),
            cons: b(cons),
            nil: b(nil),
        }
    }

    pub fn conv_field(record: &str, field: &str, data: Expr, cont: Expr) -> Expr {
        Expr::ConvField { record: record.to_string(), field: field.to_string(), data: b(data), cont: b(cont) }
    }

    pub fn has_shape(s: Shape, e: Expr) -> Expr {
        Expr::HasShape(Arc::new(s), b(e))
    }

    pub fn is_value(&self) -> bool {
        match self {
            Expr::Data(_) | Expr::Lam(..) | Expr::None(_) | Expr::Nil(_) => true,
            Expr::Some(v) => v.is_value(),
            Expr::Cons(h, t) => h.is_value() && t.is_value(),
            Expr::New(_, args) => args.iter().all(Expr::is_value),
            _ => false,
        }
    }

    /// Subexpressions in evaluation position, left to right.
    pub(crate) fn eval_children(&self) -> Vec<&Expr> {
        match self {
            Expr::Some(x)
            | Expr::Member(x, _)
            | Expr::ConvFloat(x)
            | Expr::ConvPrim(_, x)
            | Expr::HasShape(_, x)
            | Expr::Choose(x)
            | Expr::IntCoerce(x)
            | Expr::If(x, _, _)
            | Expr::MatchOption { scrutinee: x, .. }
            | Expr::MatchList { scrutinee: x, .. } => vec![x],
            Expr::Cons(x, y)
            | Expr::App(x, y)
            | Expr::Eq(x, y)
            | Expr::ConvNull(x, y)
            | Expr::ConvElements(x, y)
            | Expr::ConvField { data: x, cont: y, .. } => vec![x, y],
            Expr::New(_, args) => args.iter().collect(),
            Expr::Data(_) | Expr::Var(_) | Expr::Lam(..) | Expr::None(_) | Expr::Nil(_) | Expr::Exn => vec![],
        }
    }

    /// Whether the next reduction step raises an exception.
    pub fn raises(&self) -> bool {
        matches!(self, Expr::Exn) || self.eval_children().into_iter().find(|c| !c.is_value()).is_some_and(Expr::raises)
    }

    /// Whether the expression mentions a dynamic data operation.
    pub fn uses_data_ops(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            found |= matches!(
                e,
                Expr::ConvFloat(_)
                    | Expr::ConvPrim(..)
                    | Expr::ConvField { .. }
                    | Expr::ConvNull(..)
                    | Expr::ConvElements(..)
                    | Expr::HasShape(..)
            )
        });
        found
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Data(_) | Expr::Var(_) | Expr::None(_) | Expr::Nil(_) | Expr::Exn => {}
            Expr::Lam(_, _, e)
            | Expr::Member(e, _)
            | Expr::Some(e)
            | Expr::ConvFloat(e)
            | Expr::ConvPrim(_, e)
            | Expr::HasShape(_, e)
            | Expr::Choose(e)
            | Expr::IntCoerce(e) => e.visit(f),
            Expr::App(x, y)
            | Expr::Eq(x, y)
            | Expr::Cons(x, y)
            | Expr::ConvNull(x, y)
            | Expr::ConvElements(x, y)
            | Expr::ConvField { data: x, cont: y, .. } => {
                x.visit(f);
                y.visit(f);
            }
            Expr::New(_, args) => args.iter().for_each(|a| a.visit(f)),
            Expr::If(c, t, e) => {
                c.visit(f);
                t.visit(f);
                e.visit(f);
            }
            Expr::MatchOption { scrutinee, some, none, .. } => {
                scrutinee.visit(f);
                some.visit(f);
                none.visit(f);
            }
            Expr::MatchList { scrutinee, cons, nil, .. } => {
                scrutinee.visit(f);
                cons.visit(f);
                nil.visit(f);
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct MemberDef {
    pub name: String,
    pub ty: FooType,
    pub body: Expr,
}

#[derive(Debug, Clone)]
pub struct ClassDef {
    pub name: String,
    pub params: Vec<(String, FooType)>,
    pub members: Vec<MemberDef>,
}

impl ClassDef {
    pub fn member(&self, name: &str) -> Option<&MemberDef> {
        self.members.iter().find(|m| m.name == name)
    }
}

/// Class declarations in definition order.
#[derive(Debug, Clone, Default)]
pub struct ClassSet {
    classes: Vec<ClassDef>,
    index: BTreeMap<String, usize>,
}

impl ClassSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces a class.
    pub fn insert(&mut self, class: ClassDef) {
        match self.index.get(&class.name) {
            Some(&i) => self.classes[i] = class,
            None => {
                self.index.insert(class.name.clone(), self.classes.len());
                self.classes.push(class);
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&ClassDef> {
        self.index.get(name).map(|&i| &self.classes[i])
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut ClassDef> {
        self.index.get(name).map(|&i| &mut self.classes[i])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ClassDef> {
        self.classes.iter()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Rebuilds the set with every class passed through `f`; names may change.
    pub fn map(self, mut f: impl FnMut(ClassDef) -> ClassDef) -> ClassSet {
        let mut out = ClassSet::new();
        for c in self.classes {
            out.insert(f(c));
        }
        out
    }
}

impl fmt::Display for FooType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FooType::Int => f.write_str("int"),
            FooType::Float => f.write_str("float"),
            FooType::Bool => f.write_str("bool"),
            FooType::Text => f.write_str("string"),
            FooType::Data => f.write_str("Data"),
            FooType::Class(c) => f.write_str(c),
            FooType::Arrow(a, r) if matches!(**a, FooType::Arrow(..)) => write!(f, "({a}) -> {r}"),
            FooType::Arrow(a, r) => write!(f, "{a} -> {r}"),
            FooType::List(t) => write!(f, "list<{t}>"),
            FooType::Option(t) => write!(f, "option<{t}>"),
        }
    }
}

impl fmt::Display for Prim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.foo_type().fmt(f)
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpKind::ConvFloat => "convFloat",
            OpKind::ConvPrim => "convPrim",
            OpKind::ConvField => "convField",
            OpKind::ConvNull => "convNull",
            OpKind::ConvElements => "convElements",
            OpKind::HasShape => "hasShape",
        })
    }
}
