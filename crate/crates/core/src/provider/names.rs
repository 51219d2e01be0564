use std::collections::{BTreeMap, BTreeSet};

use super::Provided;
use crate::data::BULLET;
use crate::foo::{ClassDef, ClassSet, Expr, FooType, MemberDef};

/// Splits on non-alphanumeric characters and case boundaries, then
/// capitalizes each word: `temp_min` becomes `TempMin`.
pub fn pascal_case(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let mut words: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if !c.is_alphanumeric() {
            if !cur.is_empty() {
                words.push(std::mem::take(&mut cur));
            }
            continue;
        }
        let prev = i.checked_sub(1).map(|j| chars[j]);
        let next = chars.get(i + 1).copied();
        let boundary = c.is_uppercase()
            && match prev {
                Some(p) if p.is_lowercase() || p.is_ascii_digit() => true,
                Some(p) if p.is_uppercase() => next.is_some_and(char::is_lowercase),
                _ => false,
            };
        if boundary && !cur.is_empty() {
            words.push(std::mem::take(&mut cur));
        }
        cur.push(c);
    }
    if !cur.is_empty() {
        words.push(cur);
    }
    let mut out = String::new();
    for w in words {
        let mut cs = w.chars();
        if let Some(first) = cs.next() {
            out.extend(first.to_uppercase());
            out.push_str(cs.as_str());
        }
    }
    if out.starts_with(|c: char| c.is_ascii_digit()) {
        out.insert(0, 'N');
    }
    out
}

fn unique(base: &str, used: &mut BTreeSet<String>) -> String {
    let mut name = base.to_string();
    let mut n = 2;
    while used.contains(&name) {
        name = format!("{base}{n}");
        n += 1;
    }
    used.insert(name.clone());
    name
}

/// Hands out class names: the PascalCase hint when there is one, otherwise
/// `C1`, `C2`, …; a taken name gets a numeric suffix.
#[derive(Debug, Default, Clone)]
pub struct ClassNamer {
    used: BTreeSet<String>,
    anonymous: usize,
}

impl ClassNamer {
    pub fn fresh(&mut self, hint: Option<&str>) -> String {
        match hint.map(pascal_case).filter(|h| !h.is_empty()) {
            Some(base) => unique(&base, &mut self.used),
            None => loop {
                self.anonymous += 1;
                let name = format!("C{}", self.anonymous);
                if self.used.insert(name.clone()) {
                    return name;
                }
            },
        }
    }
}

type Origins = BTreeMap<String, String>;

/// Hoists members of `•` members into their parent, renames the remaining
/// `•` members to `Value`, converts member names to PascalCase and resolves
/// collisions. Bodies still read the original field names.
pub fn normalize_names(p: Provided) -> Provided {
    let mut renamed: BTreeMap<String, (ClassDef, Origins)> = BTreeMap::new();
    for class in p.classes.iter() {
        let origins = p.name_map.get(&class.name).cloned().unwrap_or_default();
        let mut used = BTreeSet::new();
        let mut map = Origins::new();
        let members = class
            .members
            .iter()
            .map(|m| {
                let name = if m.name == BULLET {
                    m.name.clone()
                } else {
                    let base = pascal_case(&m.name);
                    unique(if base.is_empty() { "Value" } else { &base }, &mut used)
                };
                if let Some(o) = origins.get(&m.name) {
                    map.insert(name.clone(), o.clone());
                }
                MemberDef { name, ..m.clone() }
            })
            .collect();
        renamed.insert(class.name.clone(), (ClassDef { members, ..class.clone() }, map));
    }

    let mut done = BTreeMap::new();
    for class in p.classes.iter() {
        finalize(&class.name, &renamed, &mut done, &mut BTreeSet::new());
    }
    let mut classes = ClassSet::new();
    let mut name_map = BTreeMap::new();
    for class in p.classes.iter() {
        let (def, map) = done.remove(&class.name).expect("every class finalized");
        classes.insert(def);
        name_map.insert(class.name.clone(), map);
    }
    Provided { root_type: p.root_type, converter: p.converter, classes, name_map }
}

fn finalize(
    name: &str,
    renamed: &BTreeMap<String, (ClassDef, Origins)>,
    done: &mut BTreeMap<String, (ClassDef, Origins)>,
    visiting: &mut BTreeSet<String>,
) -> (ClassDef, Origins) {
    if let Some(r) = done.get(name) {
        return r.clone();
    }
    visiting.insert(name.to_string());
    let (class, map) = &renamed[name];
    let mut members: Vec<(MemberDef, Option<String>)> = Vec::new();
    for m in &class.members {
        if m.name != BULLET {
            members.push((m.clone(), map.get(&m.name).cloned()));
            continue;
        }
        match &m.ty {
            FooType::Class(d) if renamed.contains_key(d) && !visiting.contains(d) => {
                let (inner, inner_map) = finalize(d, renamed, done, visiting);
                for sub in inner.members.iter().filter(|s| inner_map.contains_key(&s.name)) {
                    let body = Expr::member(m.body.clone(), &sub.name);
                    members.push((
                        MemberDef { name: sub.name.clone(), ty: sub.ty.clone(), body },
                        inner_map.get(&sub.name).cloned(),
                    ));
                }
            }
            _ => members.push((MemberDef { name: "Value".into(), ..m.clone() }, map.get(BULLET).cloned())),
        }
    }
    let mut used = BTreeSet::new();
    let mut origins = Origins::new();
    let members = members
        .into_iter()
        .map(|(m, origin)| {
            let name = unique(&m.name, &mut used);
            if let Some(o) = origin {
                origins.insert(name.clone(), o);
            }
            MemberDef { name, ..m }
        })
        .collect();
    let result = (ClassDef { members, ..class.clone() }, origins);
    visiting.remove(name);
    done.insert(name.to_string(), result.clone());
    result
}
