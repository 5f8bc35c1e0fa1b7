use std::collections::BTreeMap;

use super::{Adjacency, BuildError, Endpoint, IdRegistry, Ident, ModelError, PropertyBag};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ObjectNode {
    pub id: Ident,
    pub bag: PropertyBag,
}

impl ObjectNode {
    pub fn new(id: Ident, bag: PropertyBag) -> Self {
        ObjectNode { id, bag }
    }
}

/// An arc `⟨src, dst, P⟩`; `bag` holds the remaining properties `P`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ObjectArc {
    pub id: Ident,
    pub src: Ident,
    pub dst: Ident,
    pub bag: PropertyBag,
}

impl ObjectArc {
    pub fn new(id: Ident, src: Ident, dst: Ident, bag: PropertyBag) -> Self {
        ObjectArc { id, src, dst, bag }
    }

    pub fn endpoint(&self, end: Endpoint) -> &Ident {
        match end {
            Endpoint::Src => &self.src,
            Endpoint::Dst => &self.dst,
        }
    }
}

/// A validated object-based graph. Loops and parallel arcs are allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ObjectGraph {
    nodes: BTreeMap<Ident, ObjectNode>,
    arcs: BTreeMap<Ident, ObjectArc>,
    adjacency: Adjacency,
}

impl ObjectGraph {
    pub fn new(
        nodes: impl IntoIterator<Item = ObjectNode>,
        arcs: impl IntoIterator<Item = ObjectArc>,
    ) -> Result<Self, BuildError> {
        let mut errors = Vec::new();
        let mut ids = IdRegistry::default();
        let mut node_map = BTreeMap::new();
        for node in nodes {
            if let Some(name) = node.bag.first_reserved_name() {
                errors.push(ModelError::ReservedPropertyName {
                    owner: node.id.clone(),
                    name: name.clone(),
                });
            }
            if ids.register(&node.id, &mut errors) {
                node_map.insert(node.id.clone(), node);
            }
        }
        let mut arc_map = BTreeMap::new();
        for arc in arcs {
            if let Some(name) = arc.bag.first_reserved_name() {
                errors.push(ModelError::ReservedPropertyName {
                    owner: arc.id.clone(),
                    name: name.clone(),
                });
            }
            for end in [Endpoint::Src, Endpoint::Dst] {
                if !node_map.contains_key(arc.endpoint(end)) {
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
            node_map.keys(),
            arc_map.values().map(|a: &ObjectArc| (&a.id, &a.src, &a.dst)),
        );
        Ok(ObjectGraph {
            nodes: node_map,
            arcs: arc_map,
            adjacency,
        })
    }

    pub fn empty() -> Self {
        ObjectGraph::default()
    }

    /// Nodes sorted by id.
    pub fn nodes(&self) -> impl ExactSizeIterator<Item = &ObjectNode> + Clone {
        self.nodes.values()
    }

    /// Arcs sorted by id.
    pub fn arcs(&self) -> impl ExactSizeIterator<Item = &ObjectArc> + Clone {
        self.arcs.values()
    }

    pub fn node(&self, id: &str) -> Option<&ObjectNode> {
        self.nodes.get(id)
    }

    pub fn arc(&self, id: &str) -> Option<&ObjectArc> {
        self.arcs.get(id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Arcs whose source is `node`, sorted by arc id. Loops are included.
    pub fn arcs_from(&self, node: &str) -> Result<Vec<&ObjectArc>, ModelError> {
        Ok(self
            .adjacency
            .outgoing(node)?
            .iter()
            .map(|id| &self.arcs[id])
            .collect())
    }

    /// Arcs whose destination is `node`, sorted by arc id. Loops are included.
    pub fn arcs_to(&self, node: &str) -> Result<Vec<&ObjectArc>, ModelError> {
        Ok(self
            .adjacency
            .incoming(node)?
            .iter()
            .map(|id| &self.arcs[id])
            .collect())
    }

    /// Endpoint node of an arc of this graph.
    pub fn endpoint(&self, arc: &ObjectArc, end: Endpoint) -> &ObjectNode {
        &self.nodes[arc.endpoint(end)]
    }
}
