//! Local relations between objects and classes: satisfaction, instance-of,
//! and the node / arc membership variants.
//!
//! Every relation has a boolean form and a `check_*` form that returns the
//! first failing condition, which the CLI prints.

use std::fmt;

use crate::model::{
    ClassArc, ClassGraph, ClassNode, ConstraintSet, Endpoint, Ident, ObjectArc, ObjectGraph,
    ObjectNode, Property, PropertyBag, PropertyConstraint, Value,
};
use crate::predicate::{EvalContext, PredicateExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MembershipKind {
    NodeStrict,
    ArcStrict,
    ArcLeft,
    ArcRight,
    ArcFull,
    NodeRelational,
}

impl MembershipKind {
    pub const ALL: [MembershipKind; 6] = [
        MembershipKind::NodeStrict,
        MembershipKind::ArcStrict,
        MembershipKind::ArcLeft,
        MembershipKind::ArcRight,
        MembershipKind::ArcFull,
        MembershipKind::NodeRelational,
    ];

    pub fn applies_to_arcs(self) -> bool {
        matches!(
            self,
            MembershipKind::ArcStrict
                | MembershipKind::ArcLeft
                | MembershipKind::ArcRight
                | MembershipKind::ArcFull
        )
    }
}

/// `p ≻ pc`: same name and the predicate holds on the value.
pub fn satisfies(p: &Property, pc: &PropertyConstraint, ctx: &EvalContext<'_>) -> bool {
    p.name == pc.name && pc.predicate.eval(&p.value, ctx)
}

/// The first constraint that no property of `bag` satisfies.
pub fn first_unsatisfied<'c>(
    bag: &PropertyBag,
    constraints: &'c ConstraintSet,
    ctx: &EvalContext<'_>,
) -> Option<&'c PropertyConstraint> {
    constraints
        .iter()
        .find(|pc| !bag.iter().any(|p| satisfies(p, pc, ctx)))
}

/// `∀ pc ∈ constraints, ∃ p ∈ bag : p ≻ pc`.
pub fn instance_of(bag: &PropertyBag, constraints: &ConstraintSet, ctx: &EvalContext<'_>) -> bool {
    first_unsatisfied(bag, constraints, ctx).is_none()
}

fn bag_instance_of(bag: &PropertyBag, class: &ClassNode, ctx: &EvalContext<'_>) -> bool {
    instance_of(bag, &class.constraints, ctx)
}

/// Evaluation context whose endpoint predicates resolve against `schema`.
pub fn eval_context(schema: &ClassGraph) -> EvalContext<'_> {
    EvalContext::new(schema, bag_instance_of)
}

/// The arc as a plain object: its properties plus `src` / `dst` holding the
/// endpoint nodes.
pub fn arc_as_object(graph: &ObjectGraph, arc: &ObjectArc) -> PropertyBag {
    let endpoint = |end| {
        Property {
            name: Ident::new(end_name(end)).expect("reserved names are identifiers"),
            value: Value::Obj(graph.endpoint(arc, end).bag.clone()),
        }
    };
    PropertyBag::new(
        arc.bag
            .iter()
            .cloned()
            .chain([endpoint(Endpoint::Src), endpoint(Endpoint::Dst)]),
    )
}

/// The class arc as a plain class: its constraints plus `src` / `dst`
/// instance-of predicates on the endpoint classes.
pub fn class_arc_as_class(class_arc: &ClassArc) -> ConstraintSet {
    let endpoint = |end| {
        PropertyConstraint::new(
            Ident::new(end_name(end)).expect("reserved names are identifiers"),
            PredicateExpr::InstanceOfRef(class_arc.endpoint(end).clone()),
        )
    };
    ConstraintSet::new(
        class_arc
            .constraints
            .iter()
            .cloned()
            .chain([endpoint(Endpoint::Src), endpoint(Endpoint::Dst)]),
    )
}

fn end_name(end: Endpoint) -> &'static str {
    match end {
        Endpoint::Src => "src",
        Endpoint::Dst => "dst",
    }
}

/// Why a membership relation does not hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipFailure {
    Unsatisfied {
        constraint: PropertyConstraint,
    },
    EndpointNotMember {
        end: Endpoint,
        node: Ident,
        class: Ident,
        cause: Box<MembershipFailure>,
    },
    NotStrictMember {
        cause: Box<MembershipFailure>,
    },
    NoLeftMemberArc {
        node: Ident,
        class_arc: Ident,
    },
    NoRightMemberArc {
        node: Ident,
        class_arc: Ident,
    },
}

impl fmt::Display for MembershipFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipFailure::Unsatisfied { constraint } => write!(
                f,
                "no property satisfies constraint `{}: {}`",
                constraint.name, constraint.predicate
            ),
            MembershipFailure::EndpointNotMember {
                end,
                node,
                class,
                cause,
            } => {
                let which = match end {
                    Endpoint::Src => "source",
                    Endpoint::Dst => "destination",
                };
                write!(f, "{which} node `{node}` is not a strict member of `{class}`: {cause}")
            }
            MembershipFailure::NotStrictMember { cause } => {
                write!(f, "condition (1): not a strict member: {cause}")
            }
            MembershipFailure::NoLeftMemberArc { node, class_arc } => write!(
                f,
                "condition (2): no arc starting from `{node}` is a left member of `{class_arc}`"
            ),
            MembershipFailure::NoRightMemberArc { node, class_arc } => write!(
                f,
                "condition (3): no arc leading to `{node}` is a right member of `{class_arc}`"
            ),
        }
    }
}

type Check = Result<(), MembershipFailure>;

/// Membership relations between an object graph and a schema.
#[derive(Clone, Copy, Debug)]
pub struct Membership<'a> {
    graph: &'a ObjectGraph,
    schema: &'a ClassGraph,
    ctx: EvalContext<'a>,
}

impl<'a> Membership<'a> {
    pub fn new(graph: &'a ObjectGraph, schema: &'a ClassGraph) -> Self {
        Membership {
            graph,
            schema,
            ctx: eval_context(schema),
        }
    }

    pub fn context(&self) -> &EvalContext<'a> {
        &self.ctx
    }

    pub fn graph(&self) -> &'a ObjectGraph {
        self.graph
    }

    pub fn schema(&self) -> &'a ClassGraph {
        self.schema
    }

    pub fn node_instance_of(&self, node: &ObjectNode, class: &ClassNode) -> bool {
        instance_of(&node.bag, &class.constraints, &self.ctx)
    }

    /// `a ⊏ a^α`, evaluated on the arc as an object with endpoint properties.
    pub fn arc_instance_of(&self, arc: &ObjectArc, class_arc: &ClassArc) -> bool {
        instance_of(
            &arc_as_object(self.graph, arc),
            &class_arc_as_class(class_arc),
            &self.ctx,
        )
    }

    pub fn check_node_strict(&self, node: &ObjectNode, class: &ClassNode) -> Check {
        match first_unsatisfied(&node.bag, &class.constraints, &self.ctx) {
            None => Ok(()),
            Some(pc) => Err(MembershipFailure::Unsatisfied {
                constraint: pc.clone(),
            }),
        }
    }

    pub fn node_strict(&self, node: &ObjectNode, class: &ClassNode) -> bool {
        self.check_node_strict(node, class).is_ok()
    }

    /// Only the non-endpoint properties are considered.
    pub fn check_arc_strict(&self, arc: &ObjectArc, class_arc: &ClassArc) -> Check {
        match first_unsatisfied(&arc.bag, &class_arc.constraints, &self.ctx) {
            None => Ok(()),
            Some(pc) => Err(MembershipFailure::Unsatisfied {
                constraint: pc.clone(),
            }),
        }
    }

    pub fn arc_strict(&self, arc: &ObjectArc, class_arc: &ClassArc) -> bool {
        self.check_arc_strict(arc, class_arc).is_ok()
    }

    fn check_endpoint(&self, arc: &ObjectArc, class_arc: &ClassArc, end: Endpoint) -> Check {
        let node = self.graph.endpoint(arc, end);
        let class = self.schema.endpoint(class_arc, end);
        self.check_node_strict(node, class)
            .map_err(|cause| MembershipFailure::EndpointNotMember {
                end,
                node: node.id.clone(),
                class: class.id.clone(),
                cause: Box::new(cause),
            })
    }

    pub fn check_arc_left(&self, arc: &ObjectArc, class_arc: &ClassArc) -> Check {
        self.check_arc_strict(arc, class_arc)?;
        self.check_endpoint(arc, class_arc, Endpoint::Src)
    }

    pub fn arc_left(&self, arc: &ObjectArc, class_arc: &ClassArc) -> bool {
        self.check_arc_left(arc, class_arc).is_ok()
    }

    pub fn check_arc_right(&self, arc: &ObjectArc, class_arc: &ClassArc) -> Check {
        self.check_arc_strict(arc, class_arc)?;
        self.check_endpoint(arc, class_arc, Endpoint::Dst)
    }

    pub fn arc_right(&self, arc: &ObjectArc, class_arc: &ClassArc) -> bool {
        self.check_arc_right(arc, class_arc).is_ok()
    }

    pub fn check_arc_full(&self, arc: &ObjectArc, class_arc: &ClassArc) -> Check {
        self.check_arc_left(arc, class_arc)?;
        self.check_arc_right(arc, class_arc)
    }

    pub fn arc_full(&self, arc: &ObjectArc, class_arc: &ClassArc) -> bool {
        self.check_arc_full(arc, class_arc).is_ok()
    }

    /// Relational membership of `node` in `class` within this graph pair:
    /// strict membership, plus a left-member arc out of `node` for every
    /// class arc leaving `class`, plus a right-member arc into `node` for
    /// every class arc entering it. Loop class arcs count in both directions.
    pub fn check_node_relational(&self, node: &ObjectNode, class: &ClassNode) -> Check {
        self.check_node_strict(node, class)
            .map_err(|cause| MembershipFailure::NotStrictMember {
                cause: Box::new(cause),
            })?;
        let outgoing = self.graph.arcs_from(&node.id).unwrap_or_default();
        for class_arc in self.schema.arcs_from(&class.id).unwrap_or_default() {
            if !outgoing.iter().any(|a| self.arc_left(a, class_arc)) {
                return Err(MembershipFailure::NoLeftMemberArc {
                    node: node.id.clone(),
                    class_arc: class_arc.id.clone(),
                });
            }
        }
        let incoming = self.graph.arcs_to(&node.id).unwrap_or_default();
        for class_arc in self.schema.arcs_to(&class.id).unwrap_or_default() {
            if !incoming.iter().any(|a| self.arc_right(a, class_arc)) {
                return Err(MembershipFailure::NoRightMemberArc {
                    node: node.id.clone(),
                    class_arc: class_arc.id.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn node_relational(&self, node: &ObjectNode, class: &ClassNode) -> bool {
        self.check_node_relational(node, class).is_ok()
    }
}
