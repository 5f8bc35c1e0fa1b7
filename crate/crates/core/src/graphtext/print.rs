use crate::model::{ClassGraph, ConstraintSet, Ident, ObjectGraph, PropertyBag};
use crate::syntax::write_value;

/// Canonical text: nodes then arcs, each sorted by id; properties sorted;
/// two-space indentation.
pub fn print_object_graph(graph: &ObjectGraph) -> String {
    let mut out = String::from("graph g {\n");
    for n in graph.nodes() {
        header(&mut out, "node", &n.id, None);
        bag(&mut out, &n.bag);
    }
    for a in graph.arcs() {
        header(&mut out, "arc", &a.id, Some((&a.src, &a.dst)));
        bag(&mut out, &a.bag);
    }
    out.push_str("}\n");
    out
}

pub fn print_class_graph(schema: &ClassGraph) -> String {
    let mut out = String::from("schema s {\n");
    for c in schema.classes() {
        header(&mut out, "class", &c.id, None);
        constraints(&mut out, &c.constraints);
    }
    for a in schema.arcs() {
        header(&mut out, "arc", &a.id, Some((&a.src, &a.dst)));
        constraints(&mut out, &a.constraints);
    }
    out.push_str("}\n");
    out
}

fn header(out: &mut String, keyword: &str, id: &Ident, ends: Option<(&Ident, &Ident)>) {
    out.push_str("  ");
    out.push_str(keyword);
    out.push(' ');
    out.push_str(id);
    if let Some((src, dst)) = ends {
        out.push_str(&format!(": {src} -> {dst}"));
    }
    out.push(' ');
}

fn bag(out: &mut String, bag: &PropertyBag) {
    block(out, bag.iter().map(|p| {
        let mut line = format!("{} = ", p.name);
        write_value(&mut line, &p.value);
        line
    }));
}

fn constraints(out: &mut String, set: &ConstraintSet) {
    block(out, set.iter().map(|c| format!("{}: {}", c.name, c.predicate)));
}

fn block(out: &mut String, lines: impl Iterator<Item = String>) {
    let mut lines = lines.peekable();
    if lines.peek().is_none() {
        out.push_str("{}\n");
        return;
    }
    out.push_str("{\n");
    for line in lines {
        out.push_str("    ");
        out.push_str(&line);
        out.push_str(";\n");
    }
    out.push_str("  }\n");
}
