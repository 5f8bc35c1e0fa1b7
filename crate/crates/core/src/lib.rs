//! Checks whether an object-based graph complies with a class-based graph.
//!
//! An object graph is a set of property-bearing nodes and arcs; a class
//! graph constrains properties of nodes and arcs with predicates. This crate
//! provides the data model, a small predicate language, a text format for
//! both kinds of graph, the local membership relations and the global
//! partial / normal / full compliance checks.

pub mod cli;
pub mod compliance;
pub mod graphtext;
pub mod membership;
pub mod model;
pub mod predicate;
pub mod syntax;
