use thiserror::Error;

use super::{verify_relation, CandidatePair, ComplianceMode};
use crate::membership::Membership;
use crate::model::{ClassGraph, ObjectGraph};

/// Largest candidate set the oracle will enumerate (2^20 subsets).
pub const ORACLE_MAX_CANDIDATES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} candidate pairs exceed the enumeration budget of {ORACLE_MAX_CANDIDATES}")]
    BudgetExceeded(usize),
}

/// Relational-membership pairs computed straight from the membership
/// relations, independently of the search tables.
pub fn oracle_candidates(graph: &ObjectGraph, schema: &ClassGraph) -> Vec<CandidatePair> {
    let m = Membership::new(graph, schema);
    let mut out = Vec::new();
    for n in graph.nodes() {
        for c in schema.classes() {
            if m.node_relational(n, c) {
                out.push(CandidatePair::new(n.id.clone(), c.id.clone()));
            }
        }
    }
    out
}

/// Reference decision procedure: tries every subset of the candidate pairs
/// with [`verify_relation`]. For partial mode only non-empty subsets count.
pub fn oracle_compliance(
    graph: &ObjectGraph,
    schema: &ClassGraph,
    mode: ComplianceMode,
) -> Result<bool, OracleError> {
    let candidates = oracle_candidates(graph, schema);
    if candidates.len() > ORACLE_MAX_CANDIDATES {
        return Err(OracleError::BudgetExceeded(candidates.len()));
    }
    let start = u32::from(mode == ComplianceMode::Partial);
    Ok((start..1u32 << candidates.len()).any(|mask| {
        let subset: Vec<CandidatePair> = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| p.clone())
            .collect();
        verify_relation(&subset, graph, schema, mode).holds()
    }))
}
