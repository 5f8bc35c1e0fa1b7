//! Global compliance of an object graph with a class graph.
//!
//! A compliance relation maps nodes to classes such that
//!
//! 1. every related node is a relational member of its class,
//! 2. for every class arc `cs → cd` and every related `(ns, cs)`, `(nd, cd)`
//!    some arc `ns → nd` is a full member of the class arc, and
//! 3. every class has a related node.
//!
//! Partial compliance drops (3); full compliance adds that every node is
//! related to some class.
//!
//! [`find_compliance`] builds the candidate pairs allowed by (1), turns (2)
//! into a binary conflict relation between candidates, and then runs a
//! backtracking coverage search with forward checking. The returned witness
//! is canonical: the minimum-cardinality relation whose sorted pair list is
//! lexicographically least. [`oracle_compliance`] is an exhaustive reference
//! used to cross-check the search.

mod oracle;
mod search;
mod table;
mod verify;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::membership::Membership;
use crate::model::{ClassGraph, Ident, ObjectGraph};
use search::{Budget, Exhausted, Goal, Problem};
use table::Table;

pub use oracle::{oracle_candidates, oracle_compliance, OracleError, ORACLE_MAX_CANDIDATES};
pub use verify::{verify_relation, Verification, Violation};

/// Default limit on search-node expansions per query.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComplianceMode {
    Partial,
    Normal,
    Full,
}

impl ComplianceMode {
    pub const ALL: [ComplianceMode; 3] = [
        ComplianceMode::Partial,
        ComplianceMode::Normal,
        ComplianceMode::Full,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ComplianceMode::Partial => "partial",
            ComplianceMode::Normal => "normal",
            ComplianceMode::Full => "full",
        }
    }
}

impl fmt::Display for ComplianceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ComplianceMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "partial" => Ok(ComplianceMode::Partial),
            "normal" => Ok(ComplianceMode::Normal),
            "full" => Ok(ComplianceMode::Full),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// A node ↦ class assignment.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidatePair {
    pub node: Ident,
    pub class: Ident,
}

impl CandidatePair {
    pub fn new(node: Ident, class: Ident) -> Self {
        CandidatePair { node, class }
    }
}

impl fmt::Display for CandidatePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} -> {})", self.node, self.class)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConflictReason {
    NoFullMemberArc,
}

impl ConflictReason {
    pub fn as_str(self) -> &'static str {
        match self {
            ConflictReason::NoFullMemberArc => "no full-member arc",
        }
    }
}

/// Two assignments that cannot coexist: no arc from `src_pair.node` to
/// `dst_pair.node` is a full member of `class_arc`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Conflict {
    pub class_arc: Ident,
    pub src_pair: CandidatePair,
    pub dst_pair: CandidatePair,
    pub reason: ConflictReason,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "conflict on class arc {}: {} and {}: {}",
            self.class_arc,
            self.src_pair,
            self.dst_pair,
            self.reason.as_str()
        )
    }
}

/// Outcome of a compliance query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplianceReport {
    pub mode: ComplianceMode,
    /// Verdict. In partial mode this requires a non-empty relation.
    pub compliant: bool,
    /// Verdict under the unrepaired definition; the empty relation is
    /// always a partial compliance relation.
    pub raw_compliant: bool,
    /// The search budget ran out before a verdict was reached.
    pub undecided: bool,
    pub witness: Vec<CandidatePair>,
    pub covered_classes: Vec<Ident>,
    pub uncovered_classes: Vec<Ident>,
    pub uncovered_nodes: Vec<Ident>,
    pub conflicts: Vec<Conflict>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("search budget exhausted")]
pub struct BudgetExhausted;

impl From<Exhausted> for BudgetExhausted {
    fn from(_: Exhausted) -> Self {
        BudgetExhausted
    }
}

/// Pairs `(n, c)` with `n` a relational member of `c`, sorted.
pub fn candidates(graph: &ObjectGraph, schema: &ClassGraph) -> Vec<CandidatePair> {
    let m = Membership::new(graph, schema);
    Analysis::new(&m).candidate_pairs()
}

/// Candidates, their conflicts, and the search problem over viable ones.
struct Analysis<'a> {
    table: Table<'a>,
    /// (node index, class index), ascending.
    candidates: Vec<(usize, usize)>,
    self_conflicts: Vec<Conflict>,
    viable: Vec<usize>,
    conflicts: Vec<Conflict>,
    problem: Problem,
}

impl<'a> Analysis<'a> {
    fn new(m: &Membership<'a>) -> Self {
        let table = Table::new(m);
        let mut candidates = Vec::new();
        for n in 0..table.nodes.len() {
            for c in 0..table.classes.len() {
                if table.relational(n, c) {
                    candidates.push((n, c));
                }
            }
        }

        let pair = |(n, c): (usize, usize)| {
            CandidatePair::new(table.nodes[n].id.clone(), table.classes[c].id.clone())
        };
        // class arcs whose endpoints match (from, to)
        let violated = |from: (usize, usize), to: (usize, usize)| -> Vec<usize> {
            (0..table.class_arcs.len())
                .filter(|&ca| {
                    table.class_arc_ends(ca) == (from.1, to.1)
                        && !table.has_full_arc(from.0, to.0, ca)
                })
                .collect()
        };
        let conflict = |ca: usize, from, to| Conflict {
            class_arc: table.class_arcs[ca].id.clone(),
            src_pair: pair(from),
            dst_pair: pair(to),
            reason: ConflictReason::NoFullMemberArc,
        };

        let mut self_conflicts = Vec::new();
        let mut viable = Vec::new();
        for (i, &cand) in candidates.iter().enumerate() {
            let bad = violated(cand, cand);
            if bad.is_empty() {
                viable.push(i);
            }
            self_conflicts.extend(bad.into_iter().map(|ca| conflict(ca, cand, cand)));
        }

        let k = viable.len();
        let mut matrix = vec![vec![false; k]; k];
        let mut conflicts = Vec::new();
        for a in 0..k {
            for b in 0..k {
                if a == b {
                    continue;
                }
                let (from, to) = (candidates[viable[a]], candidates[viable[b]]);
                let bad = violated(from, to);
                if !bad.is_empty() {
                    matrix[a][b] = true;
                    matrix[b][a] = true;
                }
                conflicts.extend(bad.into_iter().map(|ca| conflict(ca, from, to)));
            }
        }
        conflicts.extend(self_conflicts.iter().cloned());
        conflicts.sort();

        let viable_pairs: Vec<(usize, usize)> = viable.iter().map(|&i| candidates[i]).collect();
        let problem = Problem::new(table.nodes.len(), table.classes.len(), &viable_pairs, matrix);
        Analysis {
            table,
            candidates,
            self_conflicts,
            viable,
            conflicts,
            problem,
        }
    }

    fn pair_of(&self, candidate: usize) -> CandidatePair {
        let (n, c) = self.candidates[candidate];
        CandidatePair::new(self.table.nodes[n].id.clone(), self.table.classes[c].id.clone())
    }

    fn candidate_pairs(&self) -> Vec<CandidatePair> {
        (0..self.candidates.len()).map(|i| self.pair_of(i)).collect()
    }

    fn witness(&self, solution: &[usize]) -> Vec<CandidatePair> {
        let mut pairs: Vec<CandidatePair> =
            solution.iter().map(|&i| self.pair_of(self.viable[i])).collect();
        pairs.sort();
        pairs
    }

    /// The goal whose solutions are exactly the minimal witnesses, or `None`
    /// when no witness exists.
    fn minimal_goal(&self, mode: ComplianceMode, budget: &mut Budget) -> Result<Option<Goal>, Exhausted> {
        let p = &self.problem;
        match mode {
            ComplianceMode::Partial => {
                let reachable = (0..p.n_classes)
                    .filter(|&c| p.class_of.contains(&c))
                    .count();
                for size in (1..=reachable).rev() {
                    let goal = Goal::Pack { size };
                    if p.exists(&[], 0, goal, budget)? {
                        return Ok(Some(goal));
                    }
                }
                Ok(None)
            }
            ComplianceMode::Normal => {
                let goal = Goal::Cover {
                    nodes: false,
                    max_size: p.n_classes,
                };
                Ok(p.exists(&[], 0, goal, budget)?.then_some(goal))
            }
            ComplianceMode::Full => {
                let most = self.viable.len();
                let any = Goal::Cover {
                    nodes: true,
                    max_size: most,
                };
                if !p.exists(&[], 0, any, budget)? {
                    return Ok(None);
                }
                for size in p.n_nodes.max(p.n_classes)..most {
                    let goal = Goal::Cover {
                        nodes: true,
                        max_size: size,
                    };
                    if p.exists(&[], 0, goal, budget)? {
                        return Ok(Some(goal));
                    }
                }
                Ok(Some(any))
            }
        }
    }

    fn classes_without_viable(&self) -> Vec<Ident> {
        let covered: BTreeSet<usize> = self.viable.iter().map(|&i| self.candidates[i].1).collect();
        (0..self.table.classes.len())
            .filter(|c| !covered.contains(c))
            .map(|c| self.table.classes[c].id.clone())
            .collect()
    }

    fn nodes_without_viable(&self) -> Vec<Ident> {
        let covered: BTreeSet<usize> = self.viable.iter().map(|&i| self.candidates[i].0).collect();
        (0..self.table.nodes.len())
            .filter(|n| !covered.contains(n))
            .map(|n| self.table.nodes[n].id.clone())
            .collect()
    }
}

/// Searches for a compliance relation of the given mode with the default
/// budget.
pub fn find_compliance(graph: &ObjectGraph, schema: &ClassGraph, mode: ComplianceMode) -> ComplianceReport {
    find_compliance_with(graph, schema, mode, SearchOptions::default())
}

pub fn find_compliance_with(
    graph: &ObjectGraph,
    schema: &ClassGraph,
    mode: ComplianceMode,
    options: SearchOptions,
) -> ComplianceReport {
    let m = Membership::new(graph, schema);
    let analysis = Analysis::new(&m);
    let mut budget = Budget::new(options.budget);

    let outcome = analysis.minimal_goal(mode, &mut budget).and_then(|goal| match goal {
        None => Ok(None),
        Some(goal) => analysis.problem.lex_least(goal, &mut budget),
    });

    let mut report = ComplianceReport {
        mode,
        compliant: false,
        raw_compliant: mode == ComplianceMode::Partial,
        undecided: false,
        witness: Vec::new(),
        covered_classes: Vec::new(),
        uncovered_classes: Vec::new(),
        uncovered_nodes: Vec::new(),
        conflicts: Vec::new(),
    };
    match outcome {
        Ok(Some(solution)) => {
            let witness = analysis.witness(&solution);
            let check = verify_relation(&witness, graph, schema, mode);
            assert!(
                check.holds() && !(mode == ComplianceMode::Partial && witness.is_empty()),
                "search produced an invalid witness: {:?}",
                check.violations
            );
            let covered: BTreeSet<&Ident> = witness.iter().map(|p| &p.class).collect();
            report.compliant = true;
            report.raw_compliant = true;
            report.covered_classes = covered.iter().map(|c| (*c).clone()).collect();
            report.uncovered_classes = schema
                .classes()
                .filter(|c| !covered.contains(&c.id))
                .map(|c| c.id.clone())
                .collect();
            report.witness = witness;
        }
        Ok(None) | Err(Exhausted) => {
            report.undecided = outcome.is_err();
            report.uncovered_classes = analysis.classes_without_viable();
            if mode == ComplianceMode::Full {
                report.uncovered_nodes = analysis.nodes_without_viable();
            }
            if !report.undecided {
                report.conflicts = if mode == ComplianceMode::Partial {
                    analysis.self_conflicts.clone()
                } else {
                    analysis.conflicts.clone()
                };
            }
        }
    }
    report
}

/// Every minimal witness for `mode`, each sorted, in lexicographic order.
/// The first one is the witness [`find_compliance`] returns.
pub fn minimal_witnesses(
    graph: &ObjectGraph,
    schema: &ClassGraph,
    mode: ComplianceMode,
    options: SearchOptions,
) -> Result<Vec<Vec<CandidatePair>>, BudgetExhausted> {
    let m = Membership::new(graph, schema);
    let analysis = Analysis::new(&m);
    let mut budget = Budget::new(options.budget);
    let Some(goal) = analysis.minimal_goal(mode, &mut budget)? else {
        return Ok(Vec::new());
    };
    let mut all: Vec<Vec<CandidatePair>> = analysis
        .problem
        .enumerate(goal, &mut budget)?
        .iter()
        .map(|s| analysis.witness(s))
        .collect();
    all.sort();
    Ok(all)
}
