//! The type-provider translation from shapes to Foo classes and converters.

mod names;
mod render;

use std::collections::BTreeMap;

use crate::data::BULLET;
use crate::foo::{b, ClassDef, ClassSet, Expr, FooType, MemberDef, Prim};
use crate::shapes::{Entry, Items, Multiplicity, RecordShape, Shape};

pub use self::names::{normalize_names, pascal_case, ClassNamer};
pub use self::render::render_signatures;

/// Name of the escape member returning the underlying data.
pub const RAW_MEMBER: &str = "Raw";

#[derive(Debug, Clone)]
pub struct Provided {
    pub root_type: FooType,
    /// A function `Data -> root_type`.
    pub converter: Expr,
    pub classes: ClassSet,
    /// For each class, member name to the source field name or shape tag it
    /// reads.
    pub name_map: BTreeMap<String, BTreeMap<String, String>>,
}

impl Provided {
    /// The converter applied to a data value.
    pub fn apply(&self, d: crate::data::DataValue) -> Expr {
        Expr::app(self.converter.clone(), Expr::data(d))
    }

    pub fn original_name(&self, class: &str, member: &str) -> Option<&str> {
        self.name_map.get(class)?.get(member).map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ProviderConfig {
    /// Add a `Raw : Data` member to every class.
    pub raw_members: bool,
}

impl Default for ProviderConfig {
    fn default() -> Self {
        ProviderConfig { raw_members: true }
    }
}

pub fn provide(s: &Shape) -> Provided {
    provide_with(s, ProviderConfig::default())
}

pub fn provide_with(s: &Shape, cfg: ProviderConfig) -> Provided {
    let mut p =
        Provider { cfg, namer: ClassNamer::default(), classes: ClassSet::new(), name_map: BTreeMap::new(), vars: 0 };
    let (root_type, converter) = p.translate(s, None);
    Provided { root_type, converter, classes: p.classes, name_map: p.name_map }
}

struct Provider {
    cfg: ProviderConfig,
    namer: ClassNamer,
    classes: ClassSet,
    name_map: BTreeMap<String, BTreeMap<String, String>>,
    vars: usize,
}

impl Provider {
    fn fresh_var(&mut self) -> String {
        self.vars += 1;
        format!("x{}", self.vars)
    }

    /// `λx:Data. body(x)`.
    fn lambda(&mut self, body: impl FnOnce(Expr) -> Expr) -> Expr {
        let x = self.fresh_var();
        let body = body(Expr::var(&x));
        Expr::lam(&x, FooType::Data, body)
    }

    fn prim(&mut self, p: Prim) -> (FooType, Expr) {
        let conv = self.lambda(|x| if p == Prim::Float { Expr::ConvFloat(b(x)) } else { Expr::ConvPrim(p, b(x)) });
        (p.foo_type(), conv)
    }

    /// Declares a class over one data parameter.
    fn class(&mut self, name: String, members: Vec<(String, FooType, Expr, String)>) -> (FooType, Expr) {
        let param = self.fresh_var();
        let mut defs = Vec::new();
        let mut origins = BTreeMap::new();
        for (member, ty, body, origin) in members {
            origins.insert(member.clone(), origin);
            defs.push(MemberDef { name: member, ty, body: Expr::app(body, Expr::var(&param)) });
        }
        if self.cfg.raw_members {
            let id = self.lambda(|x| x);
            defs.push(MemberDef { name: RAW_MEMBER.into(), ty: FooType::Data, body: Expr::app(id, Expr::var(&param)) });
        }
        self.name_map.insert(name.clone(), origins);
        self.classes.insert(ClassDef { name: name.clone(), params: vec![(param, FooType::Data)], members: defs });
        let conv = self.lambda(|x| Expr::New(name.clone(), vec![x]));
        (FooType::Class(name), conv)
    }

    fn translate(&mut self, s: &Shape, hint: Option<&str>) -> (FooType, Expr) {
        match s {
            Shape::Bool | Shape::Bit => self.prim(Prim::Bool),
            Shape::Int => self.prim(Prim::Int),
            Shape::Float => self.prim(Prim::Float),
            Shape::Text => self.prim(Prim::Text),
            Shape::Bot | Shape::Null => {
                let name = self.namer.fresh(hint);
                self.class(name, Vec::new())
            }
            Shape::Nullable(inner) => {
                let (t, e) = self.translate(inner, hint);
                let conv = self.lambda(|x| Expr::ConvNull(b(x), b(e)));
                (FooType::option(t), conv)
            }
            Shape::Record(r) => self.record(r, hint),
            Shape::Collection(Items::Homogeneous(elem)) => {
                let (t, e) = self.translate(elem, Some("Item"));
                let conv = self.lambda(|x| Expr::ConvElements(b(x), b(e)));
                (FooType::list(t), conv)
            }
            Shape::Collection(Items::Heterogeneous(entries)) => self.hetero(entries, hint),
            Shape::Any(labels) => self.any(labels, hint),
        }
    }

    fn record(&mut self, r: &RecordShape, hint: Option<&str>) -> (FooType, Expr) {
        // an element holding only content reads as that content
        if r.name != BULLET {
            if let [field] = r.fields.as_slice() {
                if field.name == BULLET {
                    let (t, e) = self.translate(&field.shape, Some(&r.name));
                    let name = r.name.clone();
                    let conv = self.lambda(|x| Expr::conv_field(&name, BULLET, x, e));
                    return (t, conv);
                }
            }
        }
        let class_hint = if r.name == BULLET { hint } else { Some(r.name.as_str()) };
        let name = self.namer.fresh(class_hint);
        let mut members = Vec::new();
        for f in &r.fields {
            let (t, e) = self.translate(&f.shape, Some(&f.name));
            let conv = self.lambda(|x| Expr::conv_field(&r.name, &f.name, x, e));
            members.push((f.name.clone(), t, conv, f.name.clone()));
        }
        self.class(name, members)
    }

    /// `choose(convElements(x, λy. if hasShape(σ, y) then Some(e y) else None))`.
    fn matching(&mut self, entry: &Shape, t: &FooType, e: Expr, x: Expr) -> Expr {
        let pick = self.lambda(|y| {
            Expr::if_(
                Expr::has_shape(entry.clone(), y.clone()),
                Expr::some(Expr::app(e, y)),
                Expr::None(Some(t.clone())),
            )
        });
        Expr::Choose(b(Expr::ConvElements(b(x), b(pick))))
    }

    fn hetero(&mut self, entries: &[Entry], hint: Option<&str>) -> (FooType, Expr) {
        match entries {
            [] => self.translate(&Shape::list(Shape::Bot), hint),
            [only] if only.multiplicity == Multiplicity::Many => {
                let (t, e) = self.translate(&only.shape, Some("Item"));
                let x = self.fresh_var();
                let body = self.matching(&only.shape, &t, e, Expr::var(&x));
                (FooType::list(t), Expr::lam(&x, FooType::Data, body))
            }
            _ => {
                let name = self.namer.fresh(hint);
                let mut members = Vec::new();
                for entry in entries {
                    let tag = entry.shape.tag().expect("collection entries have tags");
                    let member = tag.member_name().to_string();
                    let entry_hint = match &entry.shape {
                        Shape::Record(r) if r.name == BULLET => Some(member.clone()),
                        _ => None,
                    };
                    let (t, e) = self.translate(&entry.shape, entry_hint.as_deref().or(Some("Item")));
                    let (ty, conv) = self.entry_member(&entry.shape, entry.multiplicity, t, e);
                    members.push((member, ty, conv, tag.to_string()));
                }
                self.class(name, members)
            }
        }
    }

    fn entry_member(&mut self, shape: &Shape, m: Multiplicity, t: FooType, e: Expr) -> (FooType, Expr) {
        let x = self.fresh_var();
        let all = self.matching(shape, &t, e.clone(), Expr::var(&x));
        let (h, tl) = (self.fresh_var(), self.fresh_var());
        let (ty, body) = match m {
            Multiplicity::Many => (FooType::list(t), all),
            Multiplicity::ZeroOrOne => (
                FooType::option(t.clone()),
                Expr::match_list(all, &h, &tl, Expr::some(Expr::var(&h)), Expr::None(Some(t))),
            ),
            Multiplicity::ExactlyOne => (t, Expr::match_list(all, &h, &tl, Expr::var(&h), Expr::app(e, Expr::var(&x)))),
        };
        (ty, Expr::lam(&x, FooType::Data, body))
    }

    fn any(&mut self, labels: &[Shape], hint: Option<&str>) -> (FooType, Expr) {
        let tags: Vec<_> = labels.iter().filter_map(Shape::tag).collect();
        let class_hint = if tags.is_empty() {
            hint.map(str::to_string)
        } else {
            Some(tags.iter().map(|t| pascal_case(t.member_name())).collect::<Vec<_>>().join("Or"))
        };
        let name = self.namer.fresh(class_hint.as_deref());
        let mut members = Vec::new();
        for (label, tag) in labels.iter().zip(&tags) {
            let member = tag.member_name().to_string();
            let (t, e) = self.translate(label, Some(&member));
            let conv = self.lambda(|x| {
                Expr::if_(
                    Expr::has_shape(label.clone(), x.clone()),
                    Expr::some(Expr::app(e, x)),
                    Expr::None(Some(t.clone())),
                )
            });
            members.push((member, FooType::option(t), conv, tag.to_string()));
        }
        self.class(name, members)
    }
}
