//! Structural and numeric validation.
//!
//! Violations are data: validation never fails, it returns a report listing
//! every broken rule together with the node that broke it.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use super::diagram::{DiagramNode, InfluenceDiagram};
use super::graph::kahn_order;
use super::network::BeliefNetwork;
use super::node::ChanceNode;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    DuplicateNode,
    TooFewStates,
    DuplicateState,
    UnknownReference,
    DuplicateParent,
    CptRowCount,
    CptArity,
    ProbabilityRange,
    RowSum,
    Cycle,
    ValueNodeCount,
    ValueTableRows,
    NonFiniteValue,
    ValueHasSuccessor,
    OrderInconsistent,
    NoForgettingCycle,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::DuplicateNode => "duplicate node",
            Rule::TooFewStates => "fewer than two states",
            Rule::DuplicateState => "duplicate state label",
            Rule::UnknownReference => "unknown reference",
            Rule::DuplicateParent => "duplicate parent",
            Rule::CptRowCount => "cpt row count",
            Rule::CptArity => "cpt row arity",
            Rule::ProbabilityRange => "probability out of range",
            Rule::RowSum => "row sum ≠ 1",
            Rule::Cycle => "cycle",
            Rule::ValueNodeCount => "exactly one value node",
            Rule::ValueTableRows => "value table row count",
            Rule::NonFiniteValue => "non-finite value",
            Rule::ValueHasSuccessor => "value node has successors",
            Rule::OrderInconsistent => "order inconsistent",
            Rule::NoForgettingCycle => "no-forgetting cycle",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub node: Option<String>,
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Some(n) => write!(f, "node `{n}`: {}", self.rule)?,
            None => write!(f, "{}", self.rule)?,
        }
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    fn push(&mut self, node: Option<&str>, rule: Rule, detail: impl Into<String>) {
        self.violations.push(Violation {
            node: node.map(str::to_string),
            rule,
            detail: detail.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Chance,
    Decision,
    Value,
}

struct Target {
    index: usize,
    kind: Kind,
    card: usize,
}

fn check_labels(report: &mut ValidationReport, node: &str, labels: &[String], what: &str) {
    if labels.len() < 2 {
        report.push(Some(node), Rule::TooFewStates, format!("{} {what}", labels.len()));
    }
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            report.push(Some(node), Rule::DuplicateState, format!("`{l}`"));
        }
    }
}

/// Resolves a parent list; returns parent cardinalities when all resolve.
fn check_parents(
    report: &mut ValidationReport,
    node: &str,
    parents: &[String],
    lookup: &HashMap<&str, Target>,
) -> Option<Vec<usize>> {
    let mut seen = HashSet::new();
    let mut cards = Some(Vec::with_capacity(parents.len()));
    for p in parents {
        if !seen.insert(p) {
            report.push(Some(node), Rule::DuplicateParent, format!("`{p}`"));
        }
        match lookup.get(p.as_str()) {
            Some(t) if t.kind == Kind::Value => {
                report.push(Some(p), Rule::ValueHasSuccessor, format!("arc into `{node}`"));
                cards = None;
            }
            Some(t) => {
                if let Some(c) = cards.as_mut() {
                    c.push(t.card);
                }
            }
            None => {
                report.push(Some(node), Rule::UnknownReference, format!("`{p}`"));
                cards = None;
            }
        }
    }
    cards
}

fn check_cpt<T: Scalar>(
    report: &mut ValidationReport,
    node: &ChanceNode<T>,
    parent_cards: Option<Vec<usize>>,
    tolerance: &T,
) {
    if let Some(cards) = parent_cards {
        let expected: usize = cards.iter().product();
        if node.cpt.len() != expected {
            report.push(
                Some(&node.name),
                Rule::CptRowCount,
                format!("expected {expected} rows, found {}", node.cpt.len()),
            );
        }
    }
    for (r, row) in node.cpt.iter().enumerate() {
        if row.len() != node.states.len() {
            report.push(
                Some(&node.name),
                Rule::CptArity,
                format!("row {r} has {} entries for {} states", row.len(), node.states.len()),
            );
        }
        let mut sum = T::zero();
        for p in row {
            if !p.is_finite_value() || *p < T::zero() || *p > T::one() {
                report.push(
                    Some(&node.name),
                    Rule::ProbabilityRange,
                    format!("row {r} has {}", p.to_f64_lossy()),
                );
            }
            sum = sum + p.clone();
        }
        if (sum.clone() - T::one()).abs() > *tolerance {
            report.push(
                Some(&node.name),
                Rule::RowSum,
                format!("row {r} sums to {}", sum.to_f64_lossy()),
            );
        }
    }
}

/// Validates a belief network with the default row-sum tolerance.
pub fn validate_bn<T: Scalar>(network: &BeliefNetwork<T>) -> ValidationReport {
    validate_bn_with_tolerance(network, &T::row_tolerance())
}

pub fn validate_bn_with_tolerance<T: Scalar>(
    network: &BeliefNetwork<T>,
    tolerance: &T,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut lookup = HashMap::new();
    for (i, n) in network.nodes().iter().enumerate() {
        if lookup.contains_key(n.name.as_str()) {
            report.push(Some(&n.name), Rule::DuplicateNode, "");
            continue;
        }
        lookup.insert(
            n.name.as_str(),
            Target {
                index: i,
                kind: Kind::Chance,
                card: n.states.len(),
            },
        );
    }
    for n in network.nodes() {
        check_labels(&mut report, &n.name, &n.states, "states");
        let cards = check_parents(&mut report, &n.name, &n.parents, &lookup);
        check_cpt(&mut report, n, cards, tolerance);
    }
    let parents: Vec<Vec<usize>> = network
        .nodes()
        .iter()
        .map(|n| {
            n.parents
                .iter()
                .filter_map(|p| lookup.get(p.as_str()).map(|t| t.index))
                .collect()
        })
        .collect();
    if let Err(stuck) = kahn_order(&parents) {
        report.push(Some(&network.nodes()[stuck].name), Rule::Cycle, "");
    }
    report
}

/// Validates an influence diagram with the default row-sum tolerance.
pub fn validate_id<T: Scalar>(diagram: &InfluenceDiagram<T>) -> ValidationReport {
    validate_id_with_tolerance(diagram, &T::row_tolerance())
}

pub fn validate_id_with_tolerance<T: Scalar>(
    diagram: &InfluenceDiagram<T>,
    tolerance: &T,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let nodes = diagram.nodes();
    let mut lookup = HashMap::new();
    for (i, n) in nodes.iter().enumerate() {
        if lookup.contains_key(n.name()) {
            report.push(Some(n.name()), Rule::DuplicateNode, "");
            continue;
        }
        let (kind, card) = match n {
            DiagramNode::Chance(c) => (Kind::Chance, c.states.len()),
            DiagramNode::Decision(d) => (Kind::Decision, d.alternatives.len()),
            DiagramNode::Value(_) => (Kind::Value, 0),
        };
        lookup.insert(n.name(), Target { index: i, kind, card });
    }

    let value_count = diagram.value_nodes().count();
    if value_count != 1 {
        report.push(None, Rule::ValueNodeCount, format!("found {value_count}"));
    }

    for n in nodes {
        match n {
            DiagramNode::Chance(c) => {
                check_labels(&mut report, &c.name, &c.states, "states");
                let cards = check_parents(&mut report, &c.name, &c.parents, &lookup);
                check_cpt(&mut report, c, cards, tolerance);
            }
            DiagramNode::Decision(d) => {
                check_labels(&mut report, &d.name, &d.alternatives, "alternatives");
                check_parents(&mut report, &d.name, &d.observes, &lookup);
            }
            DiagramNode::Value(v) => {
                if let Some(cards) = check_parents(&mut report, &v.name, &v.parents, &lookup) {
                    let expected: usize = cards.iter().product();
                    if v.table.len() != expected {
                        report.push(
                            Some(&v.name),
                            Rule::ValueTableRows,
                            format!("expected {expected} rows, found {}", v.table.len()),
                        );
                    }
                }
                if v.table.iter().any(|x| !x.is_finite_value()) {
                    report.push(Some(&v.name), Rule::NonFiniteValue, "");
                }
            }
        }
    }

    let decision_order: Vec<usize> = nodes
        .iter()
        .enumerate()
        .filter(|(_, n)| matches!(n, DiagramNode::Decision(_)))
        .map(|(i, _)| i)
        .collect();
    let rank_of = |i: usize| decision_order.iter().position(|&d| d == i);
    for d in diagram.decisions() {
        let own = rank_of(lookup[d.name.as_str()].index);
        for o in &d.observes {
            if let Some(t) = lookup.get(o.as_str()) {
                if let (Some(seen), Some(own)) = (rank_of(t.index), own) {
                    if seen >= own {
                        report.push(
                            Some(&d.name),
                            Rule::OrderInconsistent,
                            format!("observes `{o}`, which is not an earlier decision"),
                        );
                    }
                }
            }
        }
    }

    let mut parents: Vec<Vec<usize>> = nodes
        .iter()
        .map(|n| {
            n.predecessors()
                .iter()
                .filter_map(|p| lookup.get(p.as_str()).map(|t| t.index))
                .collect()
        })
        .collect();
    if let Err(stuck) = kahn_order(&parents) {
        report.push(Some(nodes[stuck].name()), Rule::Cycle, "");
        return report;
    }

    // Implicit no-forgetting arcs must not close a cycle either.
    for (rank, &later) in decision_order.iter().enumerate() {
        for &earlier in &decision_order[..rank] {
            let mut extra = vec![earlier];
            extra.extend(parents[earlier].clone());
            for e in extra {
                if !parents[later].contains(&e) {
                    parents[later].push(e);
                }
            }
        }
    }
    if let Err(stuck) = kahn_order(&parents) {
        report.push(
            Some(nodes[stuck].name()),
            Rule::NoForgettingCycle,
            "an earlier decision's information depends on a later decision",
        );
    }
    report
}
