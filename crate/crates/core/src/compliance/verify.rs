use std::collections::BTreeSet;
use std::fmt;

use super::{CandidatePair, ComplianceMode, Conflict, ConflictReason};
use crate::membership::Membership;
use crate::model::{ClassGraph, Ident, ObjectGraph};

/// A way in which a relation fails to be a compliance relation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// The pair names a node or class that does not exist.
    UnknownPair(CandidatePair),
    /// A related node is not a relational member of its class.
    NotRelationalMember(CandidatePair),
    /// Two related pairs lack a full-member arc for a class arc.
    MissingFullMemberArc(Conflict),
    /// No node is related to this class.
    UncoveredClass(Ident),
    /// This node is related to no class (full mode only).
    UncoveredNode(Ident),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownPair(p) => write!(f, "unknown pair {p}"),
            Violation::NotRelationalMember(p) => {
                write!(f, "`{}` is not a relational member of `{}`", p.node, p.class)
            }
            Violation::MissingFullMemberArc(c) => write!(f, "{c}"),
            Violation::UncoveredClass(c) => write!(f, "uncovered class: {c}"),
            Violation::UncoveredNode(n) => write!(f, "uncovered node: {n}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verification {
    pub violations: Vec<Violation>,
}

impl Verification {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `relation` directly against the compliance conditions for `mode`,
/// without any precomputation. Partial mode accepts the empty relation.
pub fn verify_relation(
    relation: &[CandidatePair],
    graph: &ObjectGraph,
    schema: &ClassGraph,
    mode: ComplianceMode,
) -> Verification {
    let m = Membership::new(graph, schema);
    let relation: BTreeSet<&CandidatePair> = relation.iter().collect();
    let mut violations = Vec::new();

    // every related node is a relational member of its class
    let mut known = Vec::new();
    for pair in &relation {
        match (graph.node(&pair.node), schema.class(&pair.class)) {
            (Some(n), Some(c)) => {
                if !m.node_relational(n, c) {
                    violations.push(Violation::NotRelationalMember((*pair).clone()));
                }
                known.push(*pair);
            }
            _ => violations.push(Violation::UnknownPair((*pair).clone())),
        }
    }

    // every class arc is realised between every pair of related endpoints
    for class_arc in schema.arcs() {
        for src in known.iter().filter(|p| p.class == class_arc.src) {
            for dst in known.iter().filter(|p| p.class == class_arc.dst) {
                let realised = graph
                    .arcs_from(&src.node)
                    .unwrap_or_default()
                    .into_iter()
                    .any(|a| a.dst == dst.node && m.arc_full(a, class_arc));
                if !realised {
                    violations.push(Violation::MissingFullMemberArc(Conflict {
                        class_arc: class_arc.id.clone(),
                        src_pair: (*src).clone(),
                        dst_pair: (*dst).clone(),
                        reason: ConflictReason::NoFullMemberArc,
                    }));
                }
            }
        }
    }

    if mode != ComplianceMode::Partial {
        for class in schema.classes() {
            if !known.iter().any(|p| p.class == class.id) {
                violations.push(Violation::UncoveredClass(class.id.clone()));
            }
        }
    }
    if mode == ComplianceMode::Full {
        for node in graph.nodes() {
            if !known.iter().any(|p| p.node == node.id) {
                violations.push(Violation::UncoveredNode(node.id.clone()));
            }
        }
    }
    Verification { violations }
}
