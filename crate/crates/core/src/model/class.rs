use std::collections::BTreeMap;

use super::{Adjacency, BuildError, Endpoint, IdRegistry, Ident, ModelError};
use crate::predicate::PredicateExpr;

/// A property constraint `⟨name, predicate⟩`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropertyConstraint {
    pub name: Ident,
    pub predicate: PredicateExpr,
}

impl PropertyConstraint {
    pub fn new(name: Ident, predicate: PredicateExpr) -> Self {
        PropertyConstraint { name, predicate }
    }
}

/// A finite multiset of constraints, sorted, with exact duplicates collapsed.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstraintSet {
    constraints: Vec<PropertyConstraint>,
}

impl ConstraintSet {
    pub fn new(constraints: impl IntoIterator<Item = PropertyConstraint>) -> Self {
        let mut constraints: Vec<_> = constraints.into_iter().collect();
        constraints.sort();
        constraints.dedup();
        ConstraintSet { constraints }
    }

    pub fn empty() -> Self {
        ConstraintSet::default()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PropertyConstraint> {
        self.constraints.iter()
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    fn check(&self, owner: &Ident, errors: &mut Vec<ModelError>) {
        for c in &self.constraints {
            if c.name.is_reserved() {
                errors.push(ModelError::ReservedPropertyName {
                    owner: owner.clone(),
                    name: c.name.clone(),
                });
            }
            if c.predicate.has_endpoint_ref() {
                errors.push(ModelError::EndpointPredicate {
                    owner: owner.clone(),
                    name: c.name.clone(),
                });
            }
            if let Some(name) = c.predicate.first_reserved_literal_name() {
                errors.push(ModelError::ReservedPropertyName {
                    owner: owner.clone(),
                    name: name.clone(),
                });
            }
        }
    }
}

impl<'a> IntoIterator for &'a ConstraintSet {
    type Item = &'a PropertyConstraint;
    type IntoIter = std::slice::Iter<'a, PropertyConstraint>;
    fn into_iter(self) -> Self::IntoIter {
        self.constraints.iter()
    }
}

impl FromIterator<PropertyConstraint> for ConstraintSet {
    fn from_iter<T: IntoIterator<Item = PropertyConstraint>>(iter: T) -> Self {
        ConstraintSet::new(iter)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassNode {
    pub id: Ident,
    pub constraints: ConstraintSet,
}

impl ClassNode {
    pub fn new(id: Ident, constraints: ConstraintSet) -> Self {
        ClassNode { id, constraints }
    }
}

/// A class arc `⟨src, dst, P^α⟩`. The endpoint constraints are implied by
/// `src` / `dst`; `constraints` holds the remaining ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassArc {
    pub id: Ident,
    pub src: Ident,
    pub dst: Ident,
    pub constraints: ConstraintSet,
}

impl ClassArc {
    pub fn new(id: Ident, src: Ident, dst: Ident, constraints: ConstraintSet) -> Self {
        ClassArc {
            id,
            src,
            dst,
            constraints,
        }
    }

    pub fn endpoint(&self, end: Endpoint) -> &Ident {
        match end {
            Endpoint::Src => &self.src,
            Endpoint::Dst => &self.dst,
        }
    }
}

/// A validated class-based graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassGraph {
    classes: BTreeMap<Ident, ClassNode>,
    arcs: BTreeMap<Ident, ClassArc>,
    adjacency: Adjacency,
}

impl ClassGraph {
    pub fn new(
        classes: impl IntoIterator<Item = ClassNode>,
        arcs: impl IntoIterator<Item = ClassArc>,
    ) -> Result<Self, BuildError> {
        let mut errors = Vec::new();
        let mut ids = IdRegistry::default();
        let mut class_map = BTreeMap::new();
        for class in classes {
            class.constraints.check(&class.id, &mut errors);
            if ids.register(&class.id, &mut errors) {
                class_map.insert(class.id.clone(), class);
            }
        }
        let mut arc_map = BTreeMap::new();
        for arc in arcs {
            arc.constraints.check(&arc.id, &mut errors);
            for end in [Endpoint::Src, Endpoint::Dst] {
                if !class_map.contains_key(arc.endpoint(end)) {
                    errors.push(ModelError::DanglingEndpoint {
                        arc: arc.id.clone(),
                        end,
                        target: arc.endpoint(end).clone(),
                    });
                }
            }
            if ids.register(&arc.id, &mut errors) {
                arc_map.insert(arc.id.clone(), arc);
            }
        }
        if !errors.is_empty() {
            return Err(BuildError { errors });
        }
        let adjacency = Adjacency::new(
            class_map.keys(),
            arc_map.values().map(|a: &ClassArc| (&a.id, &a.src, &a.dst)),
        );
        Ok(ClassGraph {
            classes: class_map,
            arcs: arc_map,
            adjacency,
        })
    }

    pub fn empty() -> Self {
        ClassGraph::default()
    }

    /// Classes sorted by id.
    pub fn classes(&self) -> impl ExactSizeIterator<Item = &ClassNode> + Clone {
        self.classes.values()
    }

    /// Class arcs sorted by id.
    pub fn arcs(&self) -> impl ExactSizeIterator<Item = &ClassArc> + Clone {
        self.arcs.values()
    }

    pub fn class(&self, id: &str) -> Option<&ClassNode> {
        self.classes.get(id)
    }

    pub fn arc(&self, id: &str) -> Option<&ClassArc> {
        self.arcs.get(id)
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs_from(&self, class: &str) -> Result<Vec<&ClassArc>, ModelError> {
        Ok(self
            .adjacency
            .outgoing(class)?
            .iter()
            .map(|id| &self.arcs[id])
            .collect())
    }

    pub fn arcs_to(&self, class: &str) -> Result<Vec<&ClassArc>, ModelError> {
        Ok(self
            .adjacency
            .incoming(class)?
            .iter()
            .map(|id| &self.arcs[id])
            .collect())
    }

    pub fn endpoint(&self, arc: &ClassArc, end: Endpoint) -> &ClassNode {
        &self.classes[arc.endpoint(end)]
    }
}
