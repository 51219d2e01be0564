use std::collections::{BTreeSet, VecDeque};

use super::Provided;
use crate::foo::FooType;

fn class_names(t: &FooType, out: &mut Vec<String>) {
    match t {
        FooType::Class(c) => out.push(c.clone()),
        FooType::Arrow(a, r) => {
            class_names(a, out);
            class_names(r, out);
        }
        FooType::List(t) | FooType::Option(t) => class_names(t, out),
        _ => {}
    }
}

/// One line per class reachable from the root type, in breadth-first order:
/// `type C = member N : τ, member M : τ`. The raw-data escape member is
/// left out of the listing.
pub fn render_signatures(p: &Provided) -> String {
    let mut queue = VecDeque::new();
    let mut roots = Vec::new();
    class_names(&p.root_type, &mut roots);
    queue.extend(roots);
    let mut seen = BTreeSet::new();
    let mut lines = Vec::new();
    while let Some(name) = queue.pop_front() {
        if !seen.insert(name.clone()) {
            continue;
        }
        let Some(class) = p.classes.get(&name) else { continue };
        let members: Vec<_> = class.members.iter().filter(|m| p.original_name(&name, &m.name).is_some()).collect();
        if members.is_empty() {
            lines.push(format!("type {name} = (opaque)"));
            continue;
        }
        let listed: Vec<String> = members.iter().map(|m| format!("member {} : {}", m.name, m.ty)).collect();
        lines.push(format!("type {name} = {}", listed.join(", ")));
        for m in members {
            let mut next = Vec::new();
            class_names(&m.ty, &mut next);
            queue.extend(next);
        }
    }
    lines.join("\n")
}
