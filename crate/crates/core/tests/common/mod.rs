//! Seeded generators and definition-level reference checks shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use graphcomply::compliance::ComplianceMode;
use graphcomply::graphtext::{parse_class_graph, parse_object_graph};
use graphcomply::model::{
    ClassArc, ClassGraph, ClassNode, ConstraintSet, Ident, Number, ObjectArc, ObjectGraph,
    ObjectNode, Property, PropertyBag, PropertyConstraint, Value,
};
use graphcomply::predicate::{eval_predicate, EvalContext, Pattern, PredicateExpr};

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn id(s: &str) -> Ident {
    Ident::new(s).unwrap()
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture_source(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

pub fn fixture_graph(name: &str) -> ObjectGraph {
    parse_object_graph(&fixture_source(name)).into_result().unwrap()
}

pub fn fixture_schema(name: &str) -> ClassGraph {
    parse_class_graph(&fixture_source(name)).into_result().unwrap()
}

// Small instances: few names and values, so constraints often match.

const NAMES: [&str; 3] = ["a", "b", "c"];

pub fn small_value(r: &mut Rand) -> Value {
    match r.gen_range(0..6) {
        0..=2 => Value::from(r.gen_range(0..3i64)),
        3 => Value::from("x"),
        4 => Value::from("y"),
        _ => Value::Bool(true),
    }
}

pub fn small_bag(r: &mut Rand) -> PropertyBag {
    let n = r.gen_range(0..=3);
    PropertyBag::new((0..n).map(|_| Property {
        name: id(NAMES.choose(r).unwrap()),
        value: small_value(r),
    }))
}

pub fn small_predicate(r: &mut Rand, depth: u32) -> PredicateExpr {
    let int = |r: &mut Rand| Number::Int(BigInt::from(r.gen_range(0..3i64)));
    let pick = if depth == 0 { r.gen_range(0..7) } else { r.gen_range(0..10) };
    match pick {
        0 | 1 => PredicateExpr::Eq(small_value(r)),
        2 => PredicateExpr::Neq(small_value(r)),
        3 => PredicateExpr::Lt(int(r)),
        4 => PredicateExpr::Ge(int(r)),
        5 => PredicateExpr::Exists,
        6 => PredicateExpr::In((0..2).map(|_| small_value(r)).collect()),
        7 => PredicateExpr::Not(Box::new(small_predicate(r, depth - 1))),
        8 => PredicateExpr::And(vec![small_predicate(r, depth - 1), small_predicate(r, depth - 1)]),
        _ => PredicateExpr::Or(vec![small_predicate(r, depth - 1), small_predicate(r, depth - 1)]),
    }
}

pub fn small_constraints(r: &mut Rand, max: usize) -> ConstraintSet {
    let n = r.gen_range(0..=max);
    ConstraintSet::new((0..n).map(|_| {
        PropertyConstraint::new(id(NAMES.choose(r).unwrap()), small_predicate(r, 1))
    }))
}

pub fn object_graph(r: &mut Rand, max_nodes: usize, max_arcs: usize) -> ObjectGraph {
    let n = r.gen_range(1..=max_nodes);
    let nodes: Vec<ObjectNode> = (0..n)
        .map(|i| ObjectNode::new(id(&format!("n{i}")), small_bag(r)))
        .collect();
    let m = r.gen_range(0..=max_arcs);
    let arcs: Vec<ObjectArc> = (0..m)
        .map(|i| {
            let s = r.gen_range(0..n);
            let d = r.gen_range(0..n);
            ObjectArc::new(id(&format!("e{i}")), id(&format!("n{s}")), id(&format!("n{d}")), small_bag(r))
        })
        .collect();
    ObjectGraph::new(nodes, arcs).unwrap()
}

pub fn class_graph(r: &mut Rand, max_classes: usize, max_arcs: usize) -> ClassGraph {
    let n = r.gen_range(1..=max_classes);
    let classes: Vec<ClassNode> = (0..n)
        .map(|i| ClassNode::new(id(&format!("C{i}")), small_constraints(r, 2)))
        .collect();
    let m = r.gen_range(0..=max_arcs);
    let arcs: Vec<ClassArc> = (0..m)
        .map(|i| {
            let s = r.gen_range(0..n);
            let d = r.gen_range(0..n);
            ClassArc::new(
                id(&format!("R{i}")),
                id(&format!("C{s}")),
                id(&format!("C{d}")),
                small_constraints(r, 1),
            )
        })
        .collect();
    ClassGraph::new(classes, arcs).unwrap()
}

/// Instance within the oracle-equivalence bounds: at most 4 nodes and 5 arcs
/// against at most 3 classes and 4 class arcs.
pub fn small_instance(r: &mut Rand) -> (ObjectGraph, ClassGraph) {
    (object_graph(r, 4, 5), class_graph(r, 3, 4))
}

// Wide instances for printing and parsing.

fn rich_name(r: &mut Rand) -> Ident {
    const POOL: [&str; 8] = ["name", "house", "x", "_y", "Age2", "k_k", "node", "graph"];
    id(POOL.choose(r).unwrap())
}

fn rich_text(r: &mut Rand) -> String {
    const PIECES: [&str; 10] = ["a", "Love", " ", "\"", "\\", "\n", "\t", "é", "#", "{}"];
    (0..r.gen_range(0..5)).map(|_| *PIECES.choose(r).unwrap()).collect()
}

pub fn rich_number(r: &mut Rand) -> Number {
    match r.gen_range(0..5) {
        0 => Number::Int(BigInt::from(r.gen_range(-1000..1000i64))),
        1 => Number::Int(BigInt::from(r.gen::<i64>()) * BigInt::from(r.gen::<i64>())),
        2 => Number::Dec(graphcomply::model::Decimal::new(r.gen_range(-100.0..100.0)).unwrap()),
        3 => {
            let x = f64::from_bits(r.gen::<u64>());
            let x = if x.is_finite() { x } else { 0.5 };
            Number::Dec(graphcomply::model::Decimal::new(x).unwrap())
        }
        _ => Number::Dec(graphcomply::model::Decimal::new(r.gen_range(-3..3) as f64).unwrap()),
    }
}

pub fn rich_value(r: &mut Rand, depth: u32) -> Value {
    match r.gen_range(0..if depth == 0 { 4 } else { 5 }) {
        0 => Value::Text(rich_text(r)),
        1 | 2 => Value::from(rich_number(r)),
        3 => Value::Bool(r.gen()),
        _ => Value::Obj(rich_bag(r, depth - 1, 3)),
    }
}

pub fn rich_bag(r: &mut Rand, depth: u32, max: usize) -> PropertyBag {
    let n = r.gen_range(0..=max);
    PropertyBag::new((0..n).map(|_| Property {
        name: rich_name(r),
        value: rich_value(r, depth),
    }))
}

pub fn rich_predicate(r: &mut Rand, depth: u32) -> PredicateExpr {
    const PATTERNS: [&str; 5] = ["x+", "[a-z]*", "a|b", r"\d+\.\d*", "\"q\\\\\""];
    let leaf = r.gen_range(0..9);
    let pick = if depth == 0 { leaf } else { r.gen_range(0..12) };
    match pick {
        0 => PredicateExpr::Eq(rich_value(r, 1)),
        1 => PredicateExpr::Neq(rich_value(r, 1)),
        2 => PredicateExpr::Lt(rich_number(r)),
        3 => PredicateExpr::Le(rich_number(r)),
        4 => PredicateExpr::Gt(rich_number(r)),
        5 => PredicateExpr::Ge(rich_number(r)),
        6 => PredicateExpr::In((0..r.gen_range(1..4)).map(|_| rich_value(r, 1)).collect()),
        7 => PredicateExpr::Matches(Pattern::new(*PATTERNS.choose(r).unwrap()).unwrap()),
        8 => PredicateExpr::Exists,
        9 => PredicateExpr::Not(Box::new(rich_predicate(r, depth - 1))),
        10 => PredicateExpr::And((0..r.gen_range(2..4)).map(|_| rich_predicate(r, depth - 1)).collect()),
        _ => PredicateExpr::Or((0..r.gen_range(2..4)).map(|_| rich_predicate(r, depth - 1)).collect()),
    }
}

fn rich_constraints(r: &mut Rand) -> ConstraintSet {
    let n = r.gen_range(0..=3);
    ConstraintSet::new((0..n).map(|_| PropertyConstraint::new(rich_name(r), rich_predicate(r, 2))))
}

fn rich_ids(r: &mut Rand, n: usize, prefix: &str) -> Vec<Ident> {
    // distinct ids that are not in canonical order of creation
    let mut ids: Vec<Ident> = (0..n).map(|i| id(&format!("{prefix}{}", i * 7 % 11))).collect();
    ids.shuffle(r);
    ids
}

pub fn rich_object_graph(r: &mut Rand) -> ObjectGraph {
    let n = r.gen_range(0..6);
    let nodes = rich_ids(r, n, "node");
    let m = if nodes.is_empty() { 0 } else { r.gen_range(0..7) };
    let arc_ids = rich_ids(r, m, "arc");
    let arcs: Vec<ObjectArc> = arc_ids
        .into_iter()
        .map(|a| {
            let s = nodes.choose(r).unwrap().clone();
            let d = nodes.choose(r).unwrap().clone();
            ObjectArc::new(a, s, d, rich_bag(r, 2, 3))
        })
        .collect();
    let nodes: Vec<ObjectNode> = nodes.into_iter().map(|n| ObjectNode::new(n, rich_bag(r, 2, 4))).collect();
    ObjectGraph::new(nodes, arcs).unwrap()
}

pub fn rich_class_graph(r: &mut Rand) -> ClassGraph {
    let n = r.gen_range(0..5);
    let classes = rich_ids(r, n, "Class");
    let m = if classes.is_empty() { 0 } else { r.gen_range(0..6) };
    let arc_ids = rich_ids(r, m, "rel");
    let arcs: Vec<ClassArc> = arc_ids
        .into_iter()
        .map(|a| {
            let s = classes.choose(r).unwrap().clone();
            let d = classes.choose(r).unwrap().clone();
            ClassArc::new(a, s, d, rich_constraints(r))
        })
        .collect();
    let classes: Vec<ClassNode> = classes.into_iter().map(|c| ClassNode::new(c, rich_constraints(r))).collect();
    ClassGraph::new(classes, arcs).unwrap()
}

/// Membership and compliance restated directly from their definitions.
/// Shares only predicate evaluation with the library.
pub mod reference {
    use super::*;

    fn satisfied(bag: &PropertyBag, constraints: &ConstraintSet) -> bool {
        let ctx = EvalContext::detached();
        constraints.iter().all(|c| {
            bag.iter()
                .any(|p| p.name == c.name && eval_predicate(&c.predicate, &p.value, &ctx))
        })
    }

    pub fn node_strict(g: &ObjectGraph, s: &ClassGraph, n: &str, c: &str) -> bool {
        satisfied(&g.node(n).unwrap().bag, &s.class(c).unwrap().constraints)
    }

    pub fn arc_strict(g: &ObjectGraph, s: &ClassGraph, a: &str, ca: &str) -> bool {
        satisfied(&g.arc(a).unwrap().bag, &s.arc(ca).unwrap().constraints)
    }

    pub fn arc_left(g: &ObjectGraph, s: &ClassGraph, a: &str, ca: &str) -> bool {
        let (arc, class_arc) = (g.arc(a).unwrap(), s.arc(ca).unwrap());
        arc_strict(g, s, a, ca) && node_strict(g, s, &arc.src, &class_arc.src)
    }

    pub fn arc_right(g: &ObjectGraph, s: &ClassGraph, a: &str, ca: &str) -> bool {
        let (arc, class_arc) = (g.arc(a).unwrap(), s.arc(ca).unwrap());
        arc_strict(g, s, a, ca) && node_strict(g, s, &arc.dst, &class_arc.dst)
    }

    pub fn arc_full(g: &ObjectGraph, s: &ClassGraph, a: &str, ca: &str) -> bool {
        arc_left(g, s, a, ca) && arc_right(g, s, a, ca)
    }

    pub fn relational(g: &ObjectGraph, s: &ClassGraph, n: &str, c: &str) -> bool {
        node_strict(g, s, n, c)
            && s.arcs().filter(|ca| ca.src.as_str() == c).all(|ca| {
                g.arcs().any(|a| a.src.as_str() == n && arc_left(g, s, &a.id, &ca.id))
            })
            && s.arcs().filter(|ca| ca.dst.as_str() == c).all(|ca| {
                g.arcs().any(|a| a.dst.as_str() == n && arc_right(g, s, &a.id, &ca.id))
            })
    }

    pub type Pair = (Ident, Ident);

    pub fn candidates(g: &ObjectGraph, s: &ClassGraph) -> Vec<Pair> {
        let mut out = Vec::new();
        for n in g.nodes() {
            for c in s.classes() {
                if relational(g, s, &n.id, &c.id) {
                    out.push((n.id.clone(), c.id.clone()));
                }
            }
        }
        out
    }

    pub fn is_relation(g: &ObjectGraph, s: &ClassGraph, rel: &[Pair], mode: ComplianceMode) -> bool {
        let ok_pairs = rel.iter().all(|(n, c)| relational(g, s, n, c));
        let ok_arcs = s.arcs().all(|ca| {
            rel.iter().filter(|(_, c)| *c == ca.src).all(|(ns, _)| {
                rel.iter().filter(|(_, c)| *c == ca.dst).all(|(nd, _)| {
                    g.arcs().any(|a| a.src == *ns && a.dst == *nd && arc_full(g, s, &a.id, &ca.id))
                })
            })
        });
        let classes: BTreeSet<&Ident> = rel.iter().map(|(_, c)| c).collect();
        let nodes: BTreeSet<&Ident> = rel.iter().map(|(n, _)| n).collect();
        let ok_classes = mode == ComplianceMode::Partial || classes.len() == s.class_count();
        let ok_nodes = mode != ComplianceMode::Full || nodes.len() == g.node_count();
        ok_pairs && ok_arcs && ok_classes && ok_nodes
    }

    /// Every relation over the candidates satisfying `mode`; partial mode
    /// excludes the empty relation.
    pub fn relations(g: &ObjectGraph, s: &ClassGraph, mode: ComplianceMode) -> Vec<Vec<Pair>> {
        let cands = candidates(g, s);
        assert!(cands.len() <= 16, "reference enumeration is for small instances");
        let mut out = Vec::new();
        for mask in 0u32..(1 << cands.len()) {
            let rel: Vec<Pair> = cands
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect();
            if mode == ComplianceMode::Partial && rel.is_empty() {
                continue;
            }
            if is_relation(g, s, &rel, mode) {
                out.push(rel);
            }
        }
        out
    }

    /// The canonical witness: for partial mode the relations covering the
    /// most classes and, among them, the fewest pairs; otherwise the fewest
    /// pairs; ties broken by the sorted pair list.
    pub fn canonical(g: &ObjectGraph, s: &ClassGraph, mode: ComplianceMode) -> Option<Vec<Pair>> {
        let key = |rel: &Vec<Pair>| {
            let classes: BTreeSet<&Ident> = rel.iter().map(|(_, c)| c).collect();
            let cover = if mode == ComplianceMode::Partial { classes.len() } else { 0 };
            (std::cmp::Reverse(cover), rel.len(), rel.clone())
        };
        relations(g, s, mode).into_iter().min_by_key(key)
    }
}
