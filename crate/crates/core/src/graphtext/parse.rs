use std::collections::BTreeMap;

use super::{Diagnostic, ParseDiagnostics, ParseOutcome, Severity};
use crate::model::{
    BuildError, ClassArc, ClassGraph, ClassNode, ConstraintSet, Ident, ModelError,
    ObjectArc, ObjectGraph, ObjectNode, Property, PropertyBag, PropertyConstraint,
};
use crate::predicate::parse_predicate_tokens;
use crate::syntax::{parse_literal, SourceSpan, SyntaxError, TokenKind, Tokens};

pub fn parse_object_graph(source: &str) -> ParseOutcome<ObjectGraph> {
    parse_object_graph_named(source, "<input>")
}

pub fn parse_class_graph(source: &str) -> ParseOutcome<ClassGraph> {
    parse_class_graph_named(source, "<input>")
}

/// Like [`parse_object_graph`], with `file` used in spans.
pub fn parse_object_graph_named(source: &str, file: &str) -> ParseOutcome<ObjectGraph> {
    let parsed = Tokens::new(source, file).and_then(|mut t| document(&mut t, "graph", "node", object_property));
    finish(parsed, |doc| {
        let nodes = doc.vertices.iter().map(|d| ObjectNode::new(d.id.clone(), bag(&d.items)));
        let arcs = doc.arcs.iter().map(|(d, src, dst)| {
            ObjectArc::new(d.id.clone(), src.0.clone(), dst.0.clone(), bag(&d.items))
        });
        ObjectGraph::new(nodes, arcs)
    })
}

/// Like [`parse_class_graph`], with `file` used in spans.
pub fn parse_class_graph_named(source: &str, file: &str) -> ParseOutcome<ClassGraph> {
    let parsed = Tokens::new(source, file).and_then(|mut t| document(&mut t, "schema", "class", constraint));
    finish(parsed, |doc| {
        let classes = doc.vertices.iter().map(|d| ClassNode::new(d.id.clone(), constraints(&d.items)));
        let arcs = doc.arcs.iter().map(|(d, src, dst)| {
            ClassArc::new(d.id.clone(), src.0.clone(), dst.0.clone(), constraints(&d.items))
        });
        ClassGraph::new(classes, arcs)
    })
}

/// Anything with a property name: a property or a constraint.
trait Named: PartialEq {
    fn name(&self) -> &Ident;
}

impl Named for Property {
    fn name(&self) -> &Ident {
        &self.name
    }
}

impl Named for PropertyConstraint {
    fn name(&self) -> &Ident {
        &self.name
    }
}

struct Decl<T> {
    id: Ident,
    span: SourceSpan,
    /// Items with the span of their name.
    items: Vec<(T, SourceSpan)>,
}

type Endpoint = (Ident, SourceSpan);

struct Document<T> {
    vertices: Vec<Decl<T>>,
    arcs: Vec<(Decl<T>, Endpoint, Endpoint)>,
}

fn bag(items: &[(Property, SourceSpan)]) -> PropertyBag {
    items.iter().map(|(p, _)| p.clone()).collect()
}

fn constraints(items: &[(PropertyConstraint, SourceSpan)]) -> ConstraintSet {
    items.iter().map(|(c, _)| c.clone()).collect()
}

fn object_property(tokens: &mut Tokens) -> Result<Property, SyntaxError> {
    let (name, _) = tokens.expect_ident().map_err(|_| tokens.error(&["property name", "`}`"]))?;
    tokens.expect(&TokenKind::Eq, "`=`")?;
    let value = parse_literal(tokens)?;
    Ok(Property { name, value })
}

fn constraint(tokens: &mut Tokens) -> Result<PropertyConstraint, SyntaxError> {
    let (name, _) = tokens.expect_ident().map_err(|_| tokens.error(&["property name", "`}`"]))?;
    tokens.expect(&TokenKind::Colon, "`:`")?;
    let predicate = parse_predicate_tokens(tokens)?;
    Ok(PropertyConstraint::new(name, predicate))
}

fn document<T: Named>(
    tokens: &mut Tokens,
    header: &str,
    vertex: &str,
    item: fn(&mut Tokens) -> Result<T, SyntaxError>,
) -> Result<Document<T>, SyntaxError> {
    tokens.expect_word(header)?;
    tokens.expect_ident()?;
    tokens.expect(&TokenKind::LBrace, "`{`")?;
    let mut doc = Document {
        vertices: Vec::new(),
        arcs: Vec::new(),
    };
    let vertex_kw = format!("`{vertex}`");
    loop {
        if tokens.eat(&TokenKind::RBrace) {
            break;
        }
        let start = tokens.peek().span.clone();
        if tokens.at_word(vertex) {
            tokens.next();
            let (id, _) = tokens.expect_ident()?;
            let (items, end) = body(tokens, item)?;
            doc.vertices.push(Decl {
                id,
                span: start.to(&end),
                items,
            });
        } else if tokens.at_word("arc") {
            tokens.next();
            let (id, _) = tokens.expect_ident()?;
            tokens.expect(&TokenKind::Colon, "`:`")?;
            let src = tokens.expect_ident()?;
            tokens.expect(&TokenKind::Arrow, "`->`")?;
            let dst = tokens.expect_ident()?;
            let (items, end) = body(tokens, item)?;
            let decl = Decl {
                id,
                span: start.to(&end),
                items,
            };
            doc.arcs.push((decl, src, dst));
        } else {
            return Err(tokens.error(&[&vertex_kw, "`arc`", "`}`"]));
        }
    }
    tokens.expect_eof()?;
    Ok(doc)
}

/// `"{" { item [";"] } "}"`, returning the items and the closing brace span.
fn body<T>(
    tokens: &mut Tokens,
    item: fn(&mut Tokens) -> Result<T, SyntaxError>,
) -> Result<(Vec<(T, SourceSpan)>, SourceSpan), SyntaxError> {
    tokens.expect(&TokenKind::LBrace, "`{`")?;
    let mut items = Vec::new();
    loop {
        if tokens.at(&TokenKind::RBrace) {
            return Ok((items, tokens.next().span));
        }
        let span = tokens.peek().span.clone();
        items.push((item(tokens)?, span));
        if !tokens.eat(&TokenKind::Semi) && !tokens.at(&TokenKind::RBrace) {
            return Err(tokens.error(&["`;`", "`}`"]));
        }
    }
}

fn finish<T: Named, G>(
    parsed: Result<Document<T>, SyntaxError>,
    build: impl FnOnce(&Document<T>) -> Result<G, BuildError>,
) -> ParseOutcome<G> {
    let doc = match parsed {
        Ok(doc) => doc,
        Err(e) => {
            return ParseOutcome {
                value: None,
                diagnostics: ParseDiagnostics {
                    items: vec![e.into()],
                },
            }
        }
    };
    let mut items = duplicate_warnings(&doc);
    let value = match build(&doc) {
        Ok(g) => Some(g),
        Err(e) => {
            let spans = SpanIndex::new(&doc);
            items.extend(spans.locate(&e));
            None
        }
    };
    items.sort_by_key(|d| (d.span.start.offset, d.severity));
    ParseOutcome {
        value,
        diagnostics: ParseDiagnostics { items },
    }
}

fn all_decls<T>(doc: &Document<T>) -> impl Iterator<Item = &Decl<T>> {
    doc.vertices.iter().chain(doc.arcs.iter().map(|(d, _, _)| d))
}

/// Identical properties or constraints repeated within one declaration
/// collapse to one, since bags are sets.
fn duplicate_warnings<T: Named>(doc: &Document<T>) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for decl in all_decls(doc) {
        for (i, (item, span)) in decl.items.iter().enumerate() {
            if decl.items[..i].iter().any(|(earlier, _)| earlier == item) {
                out.push(Diagnostic {
                    severity: Severity::Warning,
                    message: format!(
                        "duplicate `{}` in `{}` is identical to an earlier one and was collapsed",
                        item.name(),
                        decl.id
                    ),
                    span: span.clone(),
                });
            }
        }
    }
    out
}

/// Source locations for the build errors the model can report.
struct SpanIndex<'d> {
    /// Declaration spans per id, in the order the model registers them
    /// (vertices first, then arcs).
    decls: BTreeMap<&'d Ident, Vec<&'d SourceSpan>>,
    items: BTreeMap<(&'d Ident, &'d Ident), &'d SourceSpan>,
}

impl<'d> SpanIndex<'d> {
    fn new<T: Named>(doc: &'d Document<T>) -> Self {
        let mut decls: BTreeMap<&Ident, Vec<&SourceSpan>> = BTreeMap::new();
        let mut items = BTreeMap::new();
        for decl in all_decls(doc) {
            decls.entry(&decl.id).or_default().push(&decl.span);
            for (item, span) in &decl.items {
                items.entry((&decl.id, item.name())).or_insert(span);
            }
        }
        SpanIndex { decls, items }
    }

    fn locate(&self, e: &BuildError) -> Vec<Diagnostic> {
        let mut seen_dups: BTreeMap<&Ident, usize> = BTreeMap::new();
        e.errors
            .iter()
            .map(|err| {
                let span = match err {
                    ModelError::DuplicateId(id) => {
                        let k = seen_dups.entry(id).or_insert(0);
                        *k += 1;
                        self.decls.get(id).and_then(|v| v.get(*k).or(v.last()).copied())
                    }
                    ModelError::DanglingEndpoint { arc, .. } => self.first_decl(arc),
                    ModelError::ReservedPropertyName { owner, name }
                    | ModelError::EndpointPredicate { owner, name } => self
                        .items
                        .get(&(owner, name))
                        .copied()
                        .or_else(|| self.first_decl(owner)),
                    _ => None,
                };
                Diagnostic {
                    severity: Severity::Error,
                    message: err.to_string(),
                    span: span.cloned().unwrap_or_else(|| self.fallback()),
                }
            })
            .collect()
    }

    fn first_decl(&self, id: &Ident) -> Option<&'d SourceSpan> {
        self.decls.get(id).and_then(|v| v.first().copied())
    }

    fn fallback(&self) -> SourceSpan {
        self.decls
            .values()
            .next()
            .and_then(|v| v.first())
            .map(|s| (*s).clone())
            .expect("build errors only arise from declarations")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph() {
        let out = parse_object_graph("graph g {}");
        assert!(out.diagnostics.is_empty());
        assert_eq!(out.value.unwrap(), ObjectGraph::empty());
    }

    #[test]
    fn dangling_endpoint_points_at_arc() {
        let src = "graph g {\n  node A {}\n  arc x: A -> B {}\n}\n";
        let out = parse_object_graph(src);
        assert!(out.value.is_none());
        let errs: Vec<_> = out.diagnostics.errors().collect();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].message.contains("`B`"));
        assert_eq!(errs[0].span.start.line, 3);
        assert_eq!(errs[0].span.start.column, 3);
        assert_eq!(errs[0].span.end.line, 3);
    }

    #[test]
    fn missing_literal_is_a_syntax_error() {
        let out = parse_class_graph("schema s { class C { house: = } }");
        assert!(out.value.is_none());
        let err = out.diagnostics.errors().next().unwrap();
        assert!(err.message.contains("unexpected `}`"), "{}", err.message);
        assert_eq!(err.span.start.column, 31);
    }

    #[test]
    fn duplicate_ids_report_the_second_declaration() {
        let src = "graph g {\n  node A {}\n  node A { x = 1 }\n}";
        let out = parse_object_graph(src);
        let err = out.diagnostics.errors().next().unwrap();
        assert_eq!(err.span.start.line, 3);
    }

    #[test]
    fn reserved_property_is_located() {
        let src = "graph g { node A { name = \"a\"; src = 1 } }";
        let out = parse_object_graph(src);
        let err = out.diagnostics.errors().next().unwrap();
        assert!(err.message.contains("reserved"));
        assert_eq!(err.span.start.column, 32);
    }

    #[test]
    fn repeated_property_warns_but_parses() {
        let out = parse_object_graph("graph g { node A { x = 1; x = 1; x = 2 } }");
        let g = out.value.unwrap();
        assert_eq!(g.node("A").unwrap().bag.len(), 2);
        assert_eq!(out.diagnostics.warnings().count(), 1);
        assert!(!out.diagnostics.has_errors());
    }

    #[test]
    fn schema_with_predicates() {
        let src = "schema s {\n class C { age: >= 13 and < 18; name: exists }\n arc r: C -> C {}\n}";
        let s = parse_class_graph(src).into_result().unwrap();
        assert_eq!(s.class_count(), 1);
        assert_eq!(s.arc_count(), 1);
        assert_eq!(s.class("C").unwrap().constraints.len(), 2);
    }
}
