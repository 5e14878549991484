//! Compiling an influence diagram into a belief network.
//!
//! The compiled network keeps every chance node, turns each decision into a
//! parentless chance node with a uniform prior, and replaces the value node
//! by a binary node `V` with
//!
//! ```text
//! P(V = T | pi) = (v(pi) + k2) / k1,   k1 = max v - min v,   k2 = -min v
//! ```
//!
//! so that `v(pi) = k1 * P(V = T | pi) - k2`. The information arcs are not
//! part of the network; they are recorded, closed under no-forgetting, in a
//! [`DecisionList`].

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    validate_id_with_tolerance, BeliefNetwork, ChanceNode, DecisionNode, DiagramNode, InfluenceDiagram,
};
use crate::scalar::{min_max, Scalar};

/// One decision with its information predecessors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecisionEntry {
    pub decision: String,
    /// Every node observed before the decision is made.
    pub predecessors: Vec<String>,
    /// The chance nodes among `predecessors`.
    pub chance_predecessors: Vec<String>,
}

/// Decisions in their total order, each with its information predecessors.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct DecisionList {
    pub entries: Vec<DecisionEntry>,
}

impl DecisionList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn position(&self, decision: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.decision == decision)
    }

    pub fn entry(&self, decision: &str) -> Option<&DecisionEntry> {
        self.entries.iter().find(|e| e.decision == decision)
    }
}

impl fmt::Display for DecisionList {
    /// Parenthesized form, e.g. `((D1 (C) (C)))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(
                f,
                "({} ({}) ({}))",
                e.decision,
                e.predecessors.join(" "),
                e.chance_predecessors.join(" ")
            )?;
        }
        f.write_str(")")
    }
}

/// The compiled network together with what is needed to read values back.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompiledDecisionProblem<T = f64> {
    pub network: BeliefNetwork<T>,
    pub decisions: DecisionList,
    pub k1: T,
    pub k2: T,
    pub value_node: String,
}

impl<T: Scalar> CompiledDecisionProblem<T> {
    pub fn alternatives(&self, decision: &str) -> Option<&[String]> {
        self.network.node(decision).map(|n| n.states.as_slice())
    }

    /// Maps `P(V = T | ...)` back to value units.
    pub fn expected_value(&self, probability: &T) -> T {
        self.k1.clone() * probability.clone() - self.k2.clone()
    }

    /// Replaces the prior of a converted decision node.
    pub fn with_decision_prior(&self, decision: &str, prior: Vec<T>) -> Result<Self> {
        if self.decisions.position(decision).is_none() {
            return Err(Error::UnknownNode(decision.to_string()));
        }
        let node = self.network.node(decision).expect("decision in network");
        if prior.len() != node.states.len() {
            return Err(Error::usage(format!(
                "prior for `{decision}` needs {} entries",
                node.states.len()
            )));
        }
        let replacement = ChanceNode {
            name: node.name.clone(),
            states: node.states.clone(),
            parents: Vec::new(),
            cpt: vec![prior],
        };
        Ok(Self {
            network: self.network.with_node(replacement)?,
            ..self.clone()
        })
    }
}

/// Result of the value-to-probability map.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueMapping<T> {
    pub probabilities: Vec<T>,
    pub k1: T,
    pub k2: T,
}

/// Maps a value table affinely onto `[0, 1]`.
///
/// A constant table has no range; it maps to `k1 = 0`, `k2 = -v` and every
/// probability 1, so `k1 * p - k2` still returns the constant.
pub fn value_to_probability<T: Scalar>(table: &[T]) -> Result<ValueMapping<T>> {
    let (lo, hi) = min_max(table).ok_or(Error::EmptyValueTable)?;
    if table.iter().any(|v| !v.is_finite_value()) {
        return Err(Error::usage("value table contains a non-finite entry"));
    }
    let k2 = -lo;
    let k1 = hi + k2.clone();
    let probabilities = if k1.is_zero() {
        vec![T::one(); table.len()]
    } else {
        table
            .iter()
            .map(|v| (v.clone() + k2.clone()) / k1.clone())
            .collect()
    };
    Ok(ValueMapping {
        probabilities,
        k1,
        k2,
    })
}

/// Adds the implicit no-forgetting arcs.
///
/// Each decision ends up observing every earlier decision and everything
/// that decision observed: earlier decisions in order, each followed by its
/// own observations, then the decision's original observations.
pub fn no_forgetting_closure<T: Scalar>(diagram: &InfluenceDiagram<T>) -> InfluenceDiagram<T> {
    let decisions: Vec<&DecisionNode> = diagram.decisions().collect();
    let mut closed: Vec<Vec<String>> = Vec::with_capacity(decisions.len());
    for (j, d) in decisions.iter().enumerate() {
        let mut list: Vec<String> = Vec::new();
        let mut push = |name: &String| {
            if !list.contains(name) {
                list.push(name.clone());
            }
        };
        for earlier in &decisions[..j] {
            push(&earlier.name);
            earlier.observes.iter().for_each(&mut push);
        }
        d.observes.iter().for_each(&mut push);
        closed.push(list);
    }
    let mut closed = closed.into_iter();
    let nodes = diagram
        .nodes()
        .iter()
        .map(|n| match n {
            DiagramNode::Decision(d) => DiagramNode::Decision(DecisionNode {
                observes: closed.next().expect("one list per decision"),
                ..d.clone()
            }),
            other => other.clone(),
        })
        .collect();
    InfluenceDiagram::new(diagram.name(), nodes)
}

/// Reads the decision list off a diagram whose information arcs are final.
pub fn build_decision_list<T: Scalar>(diagram: &InfluenceDiagram<T>) -> DecisionList {
    let is_chance = |name: &str| matches!(diagram.find(name), Some(DiagramNode::Chance(_)));
    let entries = diagram
        .decisions()
        .map(|d| DecisionEntry {
            decision: d.name.clone(),
            predecessors: d.observes.clone(),
            chance_predecessors: d
                .observes
                .iter()
                .filter(|o| is_chance(o))
                .cloned()
                .collect(),
        })
        .collect();
    DecisionList { entries }
}

/// Compiles an influence diagram into a decision problem over a belief
/// network.
pub fn id_to_bn<T: Scalar>(diagram: &InfluenceDiagram<T>) -> Result<CompiledDecisionProblem<T>> {
    id_to_bn_with_tolerance(diagram, &T::row_tolerance())
}

/// [`id_to_bn`] with an explicit CPT row-sum tolerance.
pub fn id_to_bn_with_tolerance<T: Scalar>(
    diagram: &InfluenceDiagram<T>,
    tolerance: &T,
) -> Result<CompiledDecisionProblem<T>> {
    let report = validate_id_with_tolerance(diagram, tolerance);
    if !report.is_ok() {
        return Err(Error::Invalid(report));
    }
    let closed = no_forgetting_closure(diagram);
    let decisions = build_decision_list(&closed);
    let value = closed.value_node().expect("validated diagram has a value node");
    let mapping = value_to_probability(&value.table)?;

    // Information arcs are dropped here, after the list has been recorded.
    let nodes = closed
        .nodes()
        .iter()
        .map(|n| match n {
            DiagramNode::Chance(c) => c.clone(),
            DiagramNode::Decision(d) => {
                let share = T::one() / T::from_count(d.alternatives.len());
                ChanceNode {
                    name: d.name.clone(),
                    states: d.alternatives.clone(),
                    parents: Vec::new(),
                    cpt: vec![vec![share; d.alternatives.len()]],
                }
            }
            DiagramNode::Value(v) => ChanceNode {
                name: v.name.clone(),
                states: vec!["T".to_string(), "F".to_string()],
                parents: v.parents.clone(),
                cpt: mapping
                    .probabilities
                    .iter()
                    .map(|p| vec![p.clone(), T::one() - p.clone()])
                    .collect(),
            },
        })
        .collect();

    Ok(CompiledDecisionProblem {
        network: BeliefNetwork::new(closed.name(), nodes),
        decisions,
        k1: mapping.k1,
        k2: mapping.k2,
        value_node: value.name.clone(),
    })
}
