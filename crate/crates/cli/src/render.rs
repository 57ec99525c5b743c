use std::collections::BTreeMap;
use std::fmt::Write;

use ifol::relalg::Relation;
use ifol::{Assignment, DomainElement, World};

pub type Labels = BTreeMap<DomainElement, String>;

pub fn element(e: &DomainElement, labels: &Labels) -> String {
    labels.get(e).cloned().unwrap_or_else(|| e.to_string())
}

/// `(a,b)`; the empty tuple is `()`.
pub fn tuple(t: &[DomainElement], labels: &Labels) -> String {
    let parts: Vec<String> = t.iter().map(|e| element(e, labels)).collect();
    format!("({})", parts.join(","))
}

pub fn tuples(r: &Relation, labels: &Labels) -> String {
    r.iter().map(|t| tuple(t, labels)).collect::<Vec<_>>().join(" ")
}

/// `t`/`f` for arity 0, otherwise the `rel k attrs` block.
pub fn relation(r: &Relation, labels: &Labels) -> String {
    if r.arity() == 0 {
        return truth(r.is_true()).to_string();
    }
    let mut s = format!("rel {}", r.arity());
    for a in r.attrs().unwrap_or_default() {
        write!(s, " {a}").expect("write to string");
    }
    for t in r.iter() {
        let parts: Vec<String> = t.iter().map(|e| element(e, labels)).collect();
        write!(s, "\n{}", parts.join(" ")).expect("write to string");
    }
    s
}

pub fn truth(b: bool) -> &'static str {
    if b {
        "t"
    } else {
        "f"
    }
}

pub fn assignment(g: &Assignment, labels: &Labels) -> String {
    g.iter().map(|(v, e)| format!("{v}={}", element(e, labels))).collect::<Vec<_>>().join(",")
}

/// A world as a `world` block of the world-set file format.
pub fn world_block(w: &World, labels: &Labels) -> String {
    let mut s = format!("world {}", w.name());
    for (p, r) in w.predicates() {
        let ts: Vec<String> = r
            .iter()
            .map(|t| format!("({})", t.iter().map(|e| element(e, labels)).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(s, "\nrel {p} =").expect("write to string");
        if !ts.is_empty() {
            write!(s, " {}", ts.join(" ")).expect("write to string");
        }
    }
    s
}

/// `"..."` with backslash escapes, for record values.
pub fn quoted(s: &str) -> String {
    format!("{s:?}")
}
