mod common;

use std::collections::BTreeSet;

use common::{brute_evidence_probability, brute_posterior, decimal_network, ev, rng};
use decnet::decide::{mev, mev_single, oracle_decision_tree, query_count_report, solve};
use decnet::exact::{
    joint_config_probability, joint_config_probability_chain, prune_barren, query_enumeration, query_ve,
    Enumeration, InferenceEngine, VariableElimination,
};
use decnet::format::{parse_document, serialize_network};
use decnet::generate::{random_decision_evidence, random_diagram, random_evidence, random_network, DiagramShape};
use decnet::model::validate_bn;
use decnet::transform::{id_to_bn, no_forgetting_closure};
use decnet::{BeliefNetwork, CompiledDecisionProblem, DiagramNode, Error, Evidence, InfluenceDiagram};
use proptest::prelude::*;
use rand::Rng;

fn network(seed: u64) -> (BeliefNetwork<f64>, Evidence) {
    let mut r = rng(seed);
    let n = r.gen_range(1..=8);
    let net = random_network::<f64, _>(&mut r, n, 3);
    let e = random_evidence(&mut r, &net, 3);
    (net, e)
}

fn diagram(seed: u64) -> InfluenceDiagram<f64> {
    random_diagram(&mut rng(seed), &DiagramShape::default())
}

fn problem_with_evidence(seed: u64) -> (InfluenceDiagram<f64>, CompiledDecisionProblem<f64>, Evidence) {
    let d = diagram(seed);
    let problem = id_to_bn(&d).unwrap();
    let e = random_decision_evidence(&mut rng(seed ^ 0x5eed), &problem);
    (d, problem, e)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn engines_agree_with_each_other_and_brute_force(seed in any::<u64>()) {
        let (net, e) = network(seed);
        for node in net.nodes().iter().filter(|n| !e.contains(&n.name)) {
            let ve = query_ve(&net, &node.name, &e).unwrap();
            let en = query_enumeration(&net, &node.name, &e).unwrap();
            let brute = brute_posterior(&net, &node.name, &e).unwrap();
            for ((v, n), b) in ve.distribution.iter().zip(&en.distribution).zip(&brute) {
                prop_assert!(close(*v, *n, 1e-9));
                prop_assert!(close(*v, *b, 1e-9));
            }
            prop_assert!(close(ve.evidence_probability, brute_evidence_probability(&net, &e), 1e-9));
        }
    }

    #[test]
    fn posteriors_are_normalized(seed in any::<u64>()) {
        let (net, e) = network(seed);
        for node in net.nodes().iter().filter(|n| !e.contains(&n.name)) {
            let total: f64 = query_ve(&net, &node.name, &e).unwrap().distribution.iter().sum();
            prop_assert!(close(total, 1.0, 1e-9));
        }
    }

    #[test]
    fn joint_configuration_is_a_chain_of_posteriors(seed in any::<u64>()) {
        let (net, e) = network(seed);
        let mut r = rng(seed.wrapping_add(1));
        let sample = random_evidence(&mut r, &net, net.len());
        let config: Evidence = sample.iter().filter(|(n, _)| !e.contains(n)).collect();
        prop_assume!(!config.is_empty());
        let joint = joint_config_probability(&net, &config, &e).unwrap();
        let chain = joint_config_probability_chain(&net, &config, &e, &VariableElimination).unwrap();
        prop_assert!(close(joint, chain, 1e-9));
    }

    #[test]
    fn pruning_barren_nodes_changes_no_answer(seed in any::<u64>()) {
        let (net, e) = network(seed);
        for node in net.nodes().iter().filter(|n| !e.contains(&n.name)) {
            let pruned = prune_barren(&net, &[&node.name], &e).unwrap();
            let before = query_enumeration(&net, &node.name, &e).unwrap();
            let after = query_enumeration(&pruned, &node.name, &e).unwrap();
            for (a, b) in before.distribution.iter().zip(&after.distribution) {
                prop_assert!(close(*a, *b, 1e-12));
            }
        }
    }

    #[test]
    fn topological_order_puts_parents_first(seed in any::<u64>()) {
        let (net, _) = network(seed);
        let order = net.topological_order().unwrap();
        let at = |name: &str| order.iter().position(|n| n == name).unwrap();
        prop_assert_eq!(order.len(), net.len());
        for node in net.nodes() {
            for p in &node.parents {
                prop_assert!(at(p) < at(&node.name));
            }
        }
    }

    #[test]
    fn validation_matches_a_normalized_joint(seed in any::<u64>(), perturb in any::<bool>()) {
        let mut net = decimal_network(seed, 5);
        if perturb {
            // X0 is always a root, so its row carries the whole joint
            let mut nodes = net.nodes().to_vec();
            let k = (nodes[0].cpt[0][0] * 100.0).round() as u32;
            nodes[0].cpt[0][0] = (k + 7) as f64 / 100.0;
            net = BeliefNetwork::new("perturbed", nodes);
        }
        let mut total = 0.0;
        common::for_each_world(&net, |_, p| total += p);
        prop_assert_eq!(validate_bn(&net).is_ok(), close(total, 1.0, 1e-9));
    }

    #[test]
    fn validation_report_survives_a_round_trip(seed in any::<u64>(), perturb in any::<bool>()) {
        let mut net = decimal_network(seed, 6);
        if perturb {
            let mut nodes = net.nodes().to_vec();
            let last = nodes.len() - 1;
            let k = (nodes[last].cpt[0][1] * 100.0).round() as u32;
            nodes[last].cpt[0][1] = (k + 3) as f64 / 100.0;
            net = BeliefNetwork::new("perturbed", nodes);
        }
        let report = validate_bn(&net);
        let again = parse_document::<f64>(&serialize_network(&net)).unwrap().into_network().unwrap();
        prop_assert_eq!(&again, &net);
        prop_assert_eq!(validate_bn(&again), report);
    }

    #[test]
    fn closure_is_idempotent_and_only_adds_arcs(seed in any::<u64>()) {
        let d = diagram(seed);
        let closed = no_forgetting_closure(&d);
        prop_assert_eq!(&no_forgetting_closure(&closed), &closed);
        let decisions: Vec<_> = d.decisions().collect();
        for (before, after) in decisions.iter().zip(closed.decisions()) {
            let added: BTreeSet<&String> = after.observes.iter().collect();
            prop_assert!(before.observes.iter().all(|o| added.contains(o)));
        }
        // each decision sees every earlier one
        for (j, after) in closed.decisions().enumerate() {
            for earlier in &decisions[..j] {
                prop_assert!(after.observes.contains(&earlier.name));
            }
        }
    }

    #[test]
    fn compiled_value_row_inverts_to_the_value(seed in any::<u64>()) {
        let d = diagram(seed);
        let problem = id_to_bn(&d).unwrap();
        prop_assert!(validate_bn(&problem.network).is_ok());
        let table = &d.value_node().unwrap().table;
        let v = problem.network.node(&problem.value_node).unwrap();
        prop_assert_eq!(v.cpt.len(), table.len());
        for (row, value) in v.cpt.iter().zip(table) {
            if problem.k1 > 0.0 {
                prop_assert!(close(problem.k1 * row[0] - problem.k2, *value, 1e-12));
            } else {
                prop_assert_eq!(row[0], 1.0);
                prop_assert_eq!(-problem.k2, *value);
            }
        }
    }

    #[test]
    fn decisions_become_roots(seed in any::<u64>()) {
        let problem = id_to_bn(&diagram(seed)).unwrap();
        for entry in &problem.decisions.entries {
            let node = problem.network.node(&entry.decision).unwrap();
            prop_assert!(node.parents.is_empty());
            prop_assert_eq!(node.cpt.len(), 1);
        }
    }

    #[test]
    fn affine_change_of_values_keeps_probabilities(seed in any::<u64>(), a in 1u32..=1000, b in -1000i32..=1000) {
        let (a, b) = (a as f64 / 100.0, b as f64 / 100.0);
        let (d, problem, e) = problem_with_evidence(seed);
        let shifted = id_to_bn(&d.map_values(|v| a * v + b)).unwrap();
        let before = problem.network.node("V").unwrap();
        let after = shifted.network.node("V").unwrap();
        for (x, y) in before.cpt.iter().flatten().zip(after.cpt.iter().flatten()) {
            prop_assert!(close(*x, *y, 1e-12));
        }
        prop_assert!(close(shifted.k1, a * problem.k1, 1e-9));
        prop_assert!(close(shifted.k2, a * problem.k2 - b, 1e-9));

        let one = solve(&problem, &e, &Evidence::new(), &VariableElimination, true).unwrap();
        let two = solve(&shifted, &e, &Evidence::new(), &VariableElimination, true).unwrap();
        prop_assert!(close(two.outcome.mev, a * one.outcome.mev + b, 1e-9));
        prop_assert_eq!(&two.outcome.first_decision, &one.outcome.first_decision);
        for (r1, r2) in one.policy.rules.iter().zip(&two.policy.rules) {
            let alts1: Vec<_> = r1.entries.iter().map(|(k, e)| (k, &e.alternative)).collect();
            let alts2: Vec<_> = r2.entries.iter().map(|(k, e)| (k, &e.alternative)).collect();
            prop_assert_eq!(alts1, alts2);
        }
    }

    #[test]
    fn decision_priors_do_not_matter(seed in any::<u64>()) {
        let (_, problem, e) = problem_with_evidence(seed);
        let mut r = rng(seed.wrapping_mul(31));
        let mut reweighted = problem.clone();
        let mut full = e.clone();
        for entry in &problem.decisions.entries {
            let alternatives = problem.alternatives(&entry.decision).unwrap();
            let weights: Vec<f64> = alternatives.iter().map(|_| r.gen_range(1..=20) as f64).collect();
            let total: f64 = weights.iter().sum();
            reweighted = reweighted
                .with_decision_prior(&entry.decision, weights.iter().map(|w| w / total).collect())
                .unwrap();
            if !full.contains(&entry.decision) {
                full.set(entry.decision.clone(), alternatives[r.gen_range(0..alternatives.len())].clone());
            }
        }
        let p = query_ve(&problem.network, "V", &full).unwrap().probability_of("T").unwrap();
        let q = query_ve(&reweighted.network, "V", &full).unwrap().probability_of("T").unwrap();
        prop_assert!(close(p, q, 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(192))]

    #[test]
    fn transform_agrees_with_the_decision_tree(seed in any::<u64>()) {
        let (d, problem, e) = problem_with_evidence(seed);
        let got = mev(&problem, &e, &Evidence::new(), &VariableElimination).unwrap();
        let (want, _) = oracle_decision_tree(&d, &e).unwrap();
        prop_assert!(close(got.mev, want.mev, 1e-9), "{} vs {}", got.mev, want.mev);
        prop_assert_eq!(got.first_decision, want.first_decision);
    }

    #[test]
    fn recursion_reduces_to_one_query_per_alternative(seed in any::<u64>()) {
        let (_, problem, e) = problem_with_evidence(seed);
        let remaining = problem.decisions.entries.iter().filter(|d| !e.contains(&d.decision)).count();
        prop_assume!(remaining == 1);
        let recursive = mev(&problem, &e, &Evidence::new(), &VariableElimination).unwrap();
        let single = mev_single(&problem, &e, &VariableElimination).unwrap();
        prop_assert!(close(recursive.mev, single.mev, 1e-12));
        prop_assert_eq!(recursive.first_decision, single.first_decision);
    }

    #[test]
    fn memo_changes_cost_not_values(seed in any::<u64>()) {
        let (_, problem, e) = problem_with_evidence(seed);
        let report = query_count_report(&problem, &e, &VariableElimination).unwrap();
        prop_assert!(close(report.mev_with_memo, report.mev_without_memo, 1e-12));
        prop_assert!(report.with_memo <= report.without_memo);
        let on = solve(&problem, &e, &Evidence::new(), &VariableElimination, true).unwrap();
        let off = solve(&problem, &e, &Evidence::new(), &VariableElimination, false).unwrap();
        prop_assert_eq!(on.policy.rules.len(), off.policy.rules.len());
        for (a, b) in on.policy.rules.iter().zip(&off.policy.rules) {
            prop_assert_eq!(a.entries.len(), b.entries.len());
            for ((ka, ea), (kb, eb)) in a.entries.iter().zip(&b.entries) {
                prop_assert_eq!(ka, kb);
                prop_assert_eq!(&ea.alternative, &eb.alternative);
                prop_assert!(close(ea.expected_value, eb.expected_value, 1e-12));
            }
        }
    }

    #[test]
    fn policy_is_consistent_with_the_outcome(seed in any::<u64>()) {
        let (_, problem, e) = problem_with_evidence(seed);
        let solution = solve(&problem, &e, &Evidence::new(), &VariableElimination, true).unwrap();
        let policy = &solution.policy;
        let outcome = &solution.outcome;

        // the first rule has one state: the initial evidence
        let first = &policy.rules[0];
        prop_assert_eq!(first.entries.len(), 1);
        let (_, entry) = first.entries.iter().next().unwrap();
        prop_assert_eq!(&entry.alternative, &outcome.first_decision);
        prop_assert!(close(entry.expected_value, outcome.mev, 1e-12));

        // every key is reachable
        for rule in &policy.rules {
            for key in rule.entries.keys() {
                let joint = VariableElimination.joint(&problem.network, &[], &e.merged(key).unwrap());
                prop_assert!(joint.is_ok());
                prop_assert!(joint.unwrap().evidence_probability > 0.0);
            }
        }

        if policy.rules.len() < 2 {
            return Ok(());
        }
        // the second rule covers exactly the positive-probability observations
        // after each alternative, and re-aggregates to the first stage value
        let decision = &outcome.decision;
        let second = &policy.rules[1];
        for (alternative, value) in &outcome.per_alternative {
            let chosen = e.with(decision.clone(), alternative.clone());
            let keys: Vec<(Evidence, f64)> = second
                .entries
                .iter()
                .filter(|(k, _)| k.get(decision) == Some(alternative.as_str()))
                .map(|(k, entry)| {
                    let observed: Evidence = k.iter().filter(|(n, _)| n != decision).collect();
                    (observed, entry.expected_value)
                })
                .collect();
            let observed: Vec<&str> = keys
                .first()
                .map(|(k, _)| k.iter().map(|(n, _)| n).collect())
                .unwrap_or_default();
            let joint = Enumeration.joint(&problem.network, &observed, &chosen).unwrap();
            let positive: BTreeSet<Evidence> = joint
                .entries()
                .filter(|(_, p)| **p > 0.0)
                .map(|(w, _)| w)
                .collect();
            let covered: BTreeSet<Evidence> = keys.iter().map(|(k, _)| k.clone()).collect();
            prop_assert_eq!(covered, positive);
            let total: f64 = keys.iter().map(|(w, v)| joint.probability(w).unwrap() * v).sum();
            prop_assert!(close(total, *value, 1e-9), "{} vs {}", total, value);
        }
    }
}

#[test]
fn impossible_evidence_is_reported_not_divided_by() {
    let net = decnet::fixtures::fig1::<f64>().unwrap();
    let mut nodes = net.nodes().to_vec();
    nodes[0].cpt[0] = vec![1.0, 0.0];
    let certain = BeliefNetwork::new("certain", nodes);
    let e = ev(&[("A", "F")]);
    assert_eq!(query_ve(&certain, "C", &e).unwrap_err(), Error::ImpossibleEvidence);
    assert_eq!(query_enumeration(&certain, "C", &e).unwrap_err(), Error::ImpossibleEvidence);
}

#[test]
fn generated_diagrams_stay_within_shape() {
    for seed in 0..200 {
        let d = diagram(seed);
        assert!(d.nodes().len() <= 9);
        assert!((1..=3).contains(&d.decisions().count()));
        for node in d.nodes() {
            if let Some(labels) = node.labels() {
                assert!(labels.len() <= 3);
            }
            if let DiagramNode::Value(v) = node {
                assert!(v.parents.iter().any(|p| p.starts_with('D')));
            }
        }
    }
}
