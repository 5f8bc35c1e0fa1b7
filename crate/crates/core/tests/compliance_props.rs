mod common;

use std::collections::BTreeSet;

use rand::Rng;

use common::{fixture_graph, fixture_schema, id, reference, rng, small_instance};
use graphcomply::compliance::{
    candidates, find_compliance, find_compliance_with, minimal_witnesses, oracle_candidates,
    oracle_compliance, verify_relation, CandidatePair, ComplianceMode, SearchOptions, Violation,
};
use graphcomply::graphtext::emit_report;
use graphcomply::model::{ClassArc, ClassGraph, ClassNode, ConstraintSet, ObjectArc, ObjectGraph, ObjectNode, PropertyBag, PropertyConstraint};

const INSTANCES: u64 = 500;

fn rev<T: Clone>(items: impl Iterator<Item = T>) -> impl Iterator<Item = T> {
    items.collect::<Vec<_>>().into_iter().rev()
}

/// A constraint set from `name: predicate`.
fn constraint(text: &str) -> ConstraintSet {
    let (name, pred) = text.split_once(':').unwrap();
    let p = graphcomply::predicate::parse_predicate(pred).unwrap();
    ConstraintSet::new([PropertyConstraint::new(id(name.trim()), p)])
}

fn to_pairs(rel: &[reference::Pair]) -> Vec<CandidatePair> {
    rel.iter().map(|(n, c)| CandidatePair::new(n.clone(), c.clone())).collect()
}

#[test]
fn candidates_match_reference() {
    for seed in 0..INSTANCES {
        let (g, s) = small_instance(&mut rng(seed));
        let expected = to_pairs(&reference::candidates(&g, &s));
        assert_eq!(candidates(&g, &s), expected, "seed {seed}");
        assert_eq!(oracle_candidates(&g, &s), expected, "seed {seed}");
    }
}

#[test]
fn verdicts_and_witnesses_match_reference() {
    let mut positives = [0; 3];
    for seed in 0..INSTANCES {
        let (g, s) = small_instance(&mut rng(seed));
        for (k, mode) in ComplianceMode::ALL.into_iter().enumerate() {
            let report = find_compliance(&g, &s, mode);
            let expected = reference::canonical(&g, &s, mode);
            assert!(!report.undecided);
            assert_eq!(report.compliant, expected.is_some(), "seed {seed} {mode}");
            assert_eq!(oracle_compliance(&g, &s, mode).unwrap(), report.compliant, "seed {seed} {mode}");
            assert_eq!(report.witness, to_pairs(&expected.clone().unwrap_or_default()), "seed {seed} {mode}");
            positives[k] += usize::from(report.compliant);
        }
    }
    // the generator must exercise both outcomes in every mode
    for (k, p) in positives.iter().enumerate() {
        assert!(*p > 10 && *p < INSTANCES as usize - 10, "mode {k}: {p} positives");
    }
}

#[test]
fn all_minimal_witnesses_match_reference() {
    for seed in 0..200 {
        let (g, s) = small_instance(&mut rng(seed));
        for mode in ComplianceMode::ALL {
            let all = minimal_witnesses(&g, &s, mode, SearchOptions::default()).unwrap();
            let Some(best) = reference::canonical(&g, &s, mode) else {
                assert!(all.is_empty());
                continue;
            };
            let classes = |rel: &Vec<reference::Pair>| rel.iter().map(|p| &p.1).collect::<BTreeSet<_>>().len();
            let mut expected: Vec<Vec<CandidatePair>> = reference::relations(&g, &s, mode)
                .into_iter()
                .filter(|r| r.len() == best.len() && classes(r) == classes(&best))
                .map(|r| to_pairs(&r))
                .collect();
            expected.sort();
            assert_eq!(all, expected, "seed {seed} {mode}");
            assert_eq!(all[0], find_compliance(&g, &s, mode).witness);
        }
    }
}

#[test]
fn modes_form_a_hierarchy() {
    for seed in 0..INSTANCES {
        let (g, s) = small_instance(&mut rng(seed));
        let [p, n, f] = ComplianceMode::ALL.map(|m| find_compliance(&g, &s, m).compliant);
        assert!(!f || n, "seed {seed}");
        // a normal witness is non-empty whenever the schema has a class
        assert!(!n || p, "seed {seed}");
    }
}

#[test]
fn partial_report_covers_as_many_classes_as_possible() {
    for seed in 0..INSTANCES {
        let (g, s) = small_instance(&mut rng(seed));
        let report = find_compliance(&g, &s, ComplianceMode::Partial);
        assert!(report.raw_compliant);
        let best = reference::relations(&g, &s, ComplianceMode::Partial)
            .iter()
            .map(|r| r.iter().map(|p| &p.1).collect::<BTreeSet<_>>().len())
            .max()
            .unwrap_or(0);
        assert_eq!(report.covered_classes.len(), best, "seed {seed}");
        assert_eq!(report.covered_classes.len() + report.uncovered_classes.len(), s.class_count());
    }
}

#[test]
fn subsets_of_partial_witnesses_are_partial_relations() {
    for seed in 0..INSTANCES {
        let mut r = rng(seed);
        let (g, s) = small_instance(&mut r);
        for mode in ComplianceMode::ALL {
            let w = find_compliance(&g, &s, mode).witness;
            let subset: Vec<CandidatePair> = w.into_iter().filter(|_| r.gen_bool(0.5)).collect();
            assert!(verify_relation(&subset, &g, &s, ComplianceMode::Partial).holds(), "seed {seed}");
        }
    }
}

#[test]
fn verify_relation_matches_reference_on_arbitrary_relations() {
    for seed in 0..INSTANCES {
        let mut r = rng(seed);
        let (g, s) = small_instance(&mut r);
        let rel: Vec<reference::Pair> = g
            .nodes()
            .flat_map(|n| s.classes().map(move |c| (n.id.clone(), c.id.clone())))
            .filter(|_| r.gen_bool(0.3))
            .collect();
        for mode in ComplianceMode::ALL {
            let got = verify_relation(&to_pairs(&rel), &g, &s, mode).holds();
            assert_eq!(got, reference::is_relation(&g, &s, &rel, mode), "seed {seed} {mode}");
        }
    }
}

#[test]
fn reports_are_deterministic() {
    for seed in 0..100 {
        let (g, s) = small_instance(&mut rng(seed));
        for mode in ComplianceMode::ALL {
            let a = emit_report(&find_compliance(&g, &s, mode));
            // rebuild the inputs from scratch in reverse order
            let g2 = ObjectGraph::new(rev(g.nodes().cloned()), rev(g.arcs().cloned())).unwrap();
            let s2 = ClassGraph::new(rev(s.classes().cloned()), rev(s.arcs().cloned())).unwrap();
            assert_eq!(a, emit_report(&find_compliance(&g2, &s2, mode)));
        }
    }
}

#[test]
fn empty_relation_is_a_raw_partial_relation_only() {
    let (g, s) = (fixture_graph("fig3.og"), fixture_schema("fig2.cg"));
    assert!(verify_relation(&[], &g, &s, ComplianceMode::Partial).holds());
    assert!(!verify_relation(&[], &g, &s, ComplianceMode::Normal).holds());

    // nothing qualifies: the verdict is negative but the raw one is not
    let g = ObjectGraph::new([ObjectNode::new(id("n"), PropertyBag::empty())], []).unwrap();
    let c = ClassNode::new(id("C"), constraint("a: exists"));
    let s = ClassGraph::new([c], []).unwrap();
    let report = find_compliance(&g, &s, ComplianceMode::Partial);
    assert!(!report.compliant);
    assert!(report.raw_compliant);
    assert_eq!(report.uncovered_classes, vec![id("C")]);
}

#[test]
fn self_conflicting_candidates_are_reported() {
    // class with a loop arc; the node has no loop arc
    let g = ObjectGraph::new([ObjectNode::new(id("n"), PropertyBag::empty())], []).unwrap();
    let s = ClassGraph::new(
        [ClassNode::new(id("C"), ConstraintSet::empty())],
        [ClassArc::new(id("loop"), id("C"), id("C"), ConstraintSet::empty())],
    )
    .unwrap();
    // n is not even relational: condition (2) needs an outgoing arc
    assert!(candidates(&g, &s).is_empty());

    // two nodes, each with an arc to the other but no loop
    let nodes = [ObjectNode::new(id("a"), PropertyBag::empty()), ObjectNode::new(id("b"), PropertyBag::empty())];
    let arcs = [
        ObjectArc::new(id("ab"), id("a"), id("b"), PropertyBag::empty()),
        ObjectArc::new(id("ba"), id("b"), id("a"), PropertyBag::empty()),
    ];
    let g = ObjectGraph::new(nodes, arcs).unwrap();
    assert_eq!(candidates(&g, &s).len(), 2);
    let report = find_compliance(&g, &s, ComplianceMode::Normal);
    assert!(!report.compliant);
    assert_eq!(report.conflicts.len(), 2);
    assert!(report.conflicts.iter().all(|c| c.src_pair == c.dst_pair));
    let msg = report.conflicts[0].to_string();
    assert!(msg.contains("no full-member arc"), "{msg}");
    let v = verify_relation(&[CandidatePair::new(id("a"), id("C"))], &g, &s, ComplianceMode::Normal);
    assert!(matches!(v.violations[0], Violation::MissingFullMemberArc(_)));
}

#[test]
fn exhausted_budget_is_undecided() {
    let (g, s) = (fixture_graph("fig1.og"), fixture_schema("fig2.cg"));
    let report = find_compliance_with(&g, &s, ComplianceMode::Full, SearchOptions { budget: 1 });
    assert!(report.undecided);
    assert!(!report.compliant);
    assert!(report.witness.is_empty());
    assert!(minimal_witnesses(&g, &s, ComplianceMode::Full, SearchOptions { budget: 1 }).is_err());
}

/// A larger instance than the oracle can handle: a chain of n nodes against
/// a chain of n classes. Only the identity assignment complies.
#[test]
fn search_scales_past_the_oracle() {
    let n = 24;
    let name = |p: &str, i: usize| id(&format!("{p}{i:02}"));
    let tag = |i: usize| PropertyBag::new([graphcomply::model::Property::new("k", i as i64).unwrap()]);
    let want = |k: usize| constraint(&format!("k: = {k}"));
    let nodes: Vec<ObjectNode> = (0..n).map(|i| ObjectNode::new(name("n", i), tag(i % 3))).collect();
    let arcs: Vec<ObjectArc> = (1..n)
        .map(|i| ObjectArc::new(name("e", i), name("n", i - 1), name("n", i), PropertyBag::empty()))
        .collect();
    let classes: Vec<ClassNode> = (0..n).map(|i| ClassNode::new(name("C", i), want(i % 3))).collect();
    let class_arcs: Vec<ClassArc> = (1..n)
        .map(|i| ClassArc::new(name("r", i), name("C", i - 1), name("C", i), ConstraintSet::empty()))
        .collect();
    let g = ObjectGraph::new(nodes, arcs).unwrap();
    let s = ClassGraph::new(classes, class_arcs).unwrap();
    assert!(oracle_candidates(&g, &s).len() > 20);
    let report = find_compliance(&g, &s, ComplianceMode::Full);
    assert!(report.compliant);
    let expected: Vec<CandidatePair> = (0..n).map(|i| CandidatePair::new(name("n", i), name("C", i))).collect();
    assert_eq!(report.witness, expected);
}
