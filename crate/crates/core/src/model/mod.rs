//! Object-based graphs, class-based graphs and the values they carry.
//!
//! Everything here is immutable once built. Graph constructors validate the
//! closure conditions (arc endpoints resolve inside the graph) and the
//! reserved `src` / `dst` names, reporting every violation they find.

mod class;
mod ident;
mod object;
mod value;

use std::fmt;

use thiserror::Error;

pub use class::{ClassArc, ClassGraph, ClassNode, ConstraintSet, PropertyConstraint};
pub use ident::Ident;
pub use object::{ObjectArc, ObjectGraph, ObjectNode};
pub use value::{Decimal, Number, Property, PropertyBag, Value};

/// Which end of an arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoint {
    Src,
    Dst,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Endpoint::Src => "src",
            Endpoint::Dst => "dst",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("decimal values must be finite")]
    NonFiniteDecimal,
    #[error("arc `{arc}` has {end} `{target}`, which is not declared in this graph")]
    DanglingEndpoint {
        arc: Ident,
        end: Endpoint,
        target: Ident,
    },
    #[error("duplicate id `{0}`")]
    DuplicateId(Ident),
    #[error("`{owner}` uses the reserved property name `{name}`")]
    ReservedPropertyName { owner: Ident, name: Ident },
    #[error("constraint `{name}` of `{owner}` uses an endpoint predicate")]
    EndpointPredicate { owner: Ident, name: Ident },
    #[error("unknown id `{0}`")]
    UnknownId(String),
}

/// All violations found while building a graph.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct BuildError {
    pub errors: Vec<ModelError>,
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.errors.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Arc ids grouped by endpoint, each list sorted by arc id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Adjacency {
    outgoing: std::collections::BTreeMap<Ident, Vec<Ident>>,
    incoming: std::collections::BTreeMap<Ident, Vec<Ident>>,
}

impl Adjacency {
    pub(crate) fn new<'a>(
        vertices: impl Iterator<Item = &'a Ident>,
        arcs: impl Iterator<Item = (&'a Ident, &'a Ident, &'a Ident)>,
    ) -> Self {
        let mut adj = Adjacency::default();
        for v in vertices {
            adj.outgoing.insert(v.clone(), Vec::new());
            adj.incoming.insert(v.clone(), Vec::new());
        }
        // arcs arrive sorted by id, so each list stays sorted
        for (id, src, dst) in arcs {
            if let Some(list) = adj.outgoing.get_mut(src) {
                list.push(id.clone());
            }
            if let Some(list) = adj.incoming.get_mut(dst) {
                list.push(id.clone());
            }
        }
        adj
    }

    pub(crate) fn outgoing(&self, vertex: &str) -> Result<&[Ident], ModelError> {
        self.outgoing
            .get(vertex)
            .map(Vec::as_slice)
            .ok_or_else(|| ModelError::UnknownId(vertex.to_owned()))
    }

    pub(crate) fn incoming(&self, vertex: &str) -> Result<&[Ident], ModelError> {
        self.incoming
            .get(vertex)
            .map(Vec::as_slice)
            .ok_or_else(|| ModelError::UnknownId(vertex.to_owned()))
    }
}

/// Tracks ids across nodes and arcs; both share one namespace per graph.
#[derive(Default)]
pub(crate) struct IdRegistry {
    seen: std::collections::BTreeSet<Ident>,
}

impl IdRegistry {
    pub(crate) fn register(&mut self, id: &Ident, errors: &mut Vec<ModelError>) -> bool {
        if self.seen.insert(id.clone()) {
            true
        } else {
            errors.push(ModelError::DuplicateId(id.clone()));
            false
        }
    }
}
