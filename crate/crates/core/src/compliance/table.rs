use std::collections::BTreeMap;

use crate::membership::Membership;
use crate::model::{ClassArc, ClassNode, ObjectArc, ObjectNode};

/// Strict-membership matrices for one (graph, schema) pair. Everything the
/// search needs is derived from them, so each predicate is evaluated once.
pub(crate) struct Table<'a> {
    pub nodes: Vec<&'a ObjectNode>,
    pub classes: Vec<&'a ClassNode>,
    pub class_arcs: Vec<&'a ClassArc>,
    node_strict: Vec<Vec<bool>>,
    arc_strict: Vec<Vec<bool>>,
    arc_ends: Vec<(usize, usize)>,
    class_arc_ends: Vec<(usize, usize)>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
    class_out: Vec<Vec<usize>>,
    class_in: Vec<Vec<usize>>,
}

impl<'a> Table<'a> {
    pub fn new(m: &Membership<'a>) -> Self {
        let (graph, schema) = (m.graph(), m.schema());
        let nodes: Vec<&ObjectNode> = graph.nodes().collect();
        let classes: Vec<&ClassNode> = schema.classes().collect();
        let arcs: Vec<&ObjectArc> = graph.arcs().collect();
        let class_arcs: Vec<&ClassArc> = schema.arcs().collect();

        let node_index: BTreeMap<&str, usize> =
            nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
        let class_index: BTreeMap<&str, usize> =
            classes.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)).collect();

        let node_strict = nodes
            .iter()
            .map(|n| classes.iter().map(|c| m.node_strict(n, c)).collect())
            .collect();
        let arc_strict = arcs
            .iter()
            .map(|a| class_arcs.iter().map(|ca| m.arc_strict(a, ca)).collect())
            .collect();

        let arc_ends: Vec<(usize, usize)> = arcs
            .iter()
            .map(|a| (node_index[a.src.as_str()], node_index[a.dst.as_str()]))
            .collect();
        let class_arc_ends: Vec<(usize, usize)> = class_arcs
            .iter()
            .map(|a| (class_index[a.src.as_str()], class_index[a.dst.as_str()]))
            .collect();

        let mut out_arcs = vec![Vec::new(); nodes.len()];
        let mut in_arcs = vec![Vec::new(); nodes.len()];
        for (i, &(s, d)) in arc_ends.iter().enumerate() {
            out_arcs[s].push(i);
            in_arcs[d].push(i);
        }
        let mut class_out = vec![Vec::new(); classes.len()];
        let mut class_in = vec![Vec::new(); classes.len()];
        for (i, &(s, d)) in class_arc_ends.iter().enumerate() {
            class_out[s].push(i);
            class_in[d].push(i);
        }

        Table {
            nodes,
            classes,
            class_arcs,
            node_strict,
            arc_strict,
            arc_ends,
            class_arc_ends,
            out_arcs,
            in_arcs,
            class_out,
            class_in,
        }
    }

    pub fn class_arc_ends(&self, ca: usize) -> (usize, usize) {
        self.class_arc_ends[ca]
    }

    fn left(&self, a: usize, ca: usize) -> bool {
        self.arc_strict[a][ca] && self.node_strict[self.arc_ends[a].0][self.class_arc_ends[ca].0]
    }

    fn right(&self, a: usize, ca: usize) -> bool {
        self.arc_strict[a][ca] && self.node_strict[self.arc_ends[a].1][self.class_arc_ends[ca].1]
    }

    fn full(&self, a: usize, ca: usize) -> bool {
        self.left(a, ca) && self.right(a, ca)
    }

    pub fn relational(&self, n: usize, c: usize) -> bool {
        self.node_strict[n][c]
            && self.class_out[c]
                .iter()
                .all(|&ca| self.out_arcs[n].iter().any(|&a| self.left(a, ca)))
            && self.class_in[c]
                .iter()
                .all(|&ca| self.in_arcs[n].iter().any(|&a| self.right(a, ca)))
    }

    /// Whether some arc `src → dst` is a full member of class arc `ca`.
    pub fn has_full_arc(&self, src: usize, dst: usize, ca: usize) -> bool {
        self.out_arcs[src]
            .iter()
            .any(|&a| self.arc_ends[a].1 == dst && self.full(a, ca))
    }
}
