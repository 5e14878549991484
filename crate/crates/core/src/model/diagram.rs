use serde::Serialize;

use super::node::{ChanceNode, DecisionNode, ValueNode};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DiagramNode<T = f64> {
    Chance(ChanceNode<T>),
    Decision(DecisionNode),
    Value(ValueNode<T>),
}

impl<T> DiagramNode<T> {
    pub fn name(&self) -> &str {
        match self {
            DiagramNode::Chance(n) => &n.name,
            DiagramNode::Decision(n) => &n.name,
            DiagramNode::Value(n) => &n.name,
        }
    }

    /// Nodes with arcs into this one (parents, or information arcs).
    pub fn predecessors(&self) -> &[String] {
        match self {
            DiagramNode::Chance(n) => &n.parents,
            DiagramNode::Decision(n) => &n.observes,
            DiagramNode::Value(n) => &n.parents,
        }
    }

    /// State or alternative labels; a value node has none.
    pub fn labels(&self) -> Option<&[String]> {
        match self {
            DiagramNode::Chance(n) => Some(&n.states),
            DiagramNode::Decision(n) => Some(&n.alternatives),
            DiagramNode::Value(_) => None,
        }
    }
}

/// Chance nodes, totally ordered decisions and a value node.
///
/// Nodes are kept in declaration order; the relative order of the decision
/// nodes is the decision order D1..Dn.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfluenceDiagram<T = f64> {
    name: String,
    nodes: Vec<DiagramNode<T>>,
}

impl<T: Scalar> InfluenceDiagram<T> {
    pub fn new(name: impl Into<String>, nodes: Vec<DiagramNode<T>>) -> Self {
        Self {
            name: name.into(),
            nodes,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nodes(&self) -> &[DiagramNode<T>] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<DiagramNode<T>> {
        self.nodes
    }

    pub fn find(&self, name: &str) -> Option<&DiagramNode<T>> {
        self.nodes.iter().find(|n| n.name() == name)
    }

    pub fn chance_nodes(&self) -> impl Iterator<Item = &ChanceNode<T>> {
        self.nodes.iter().filter_map(|n| match n {
            DiagramNode::Chance(c) => Some(c),
            _ => None,
        })
    }

    /// Decision nodes in decision order.
    pub fn decisions(&self) -> impl Iterator<Item = &DecisionNode> {
        self.nodes.iter().filter_map(|n| match n {
            DiagramNode::Decision(d) => Some(d),
            _ => None,
        })
    }

    pub fn value_nodes(&self) -> impl Iterator<Item = &ValueNode<T>> {
        self.nodes.iter().filter_map(|n| match n {
            DiagramNode::Value(v) => Some(v),
            _ => None,
        })
    }

    /// The first declared value node.
    pub fn value_node(&self) -> Option<&ValueNode<T>> {
        self.value_nodes().next()
    }

    pub fn decision(&self, name: &str) -> Option<&DecisionNode> {
        self.decisions().find(|d| d.name == name)
    }

    pub fn labels_of(&self, name: &str) -> Option<&[String]> {
        self.find(name).and_then(DiagramNode::labels)
    }

    /// Copy with the value table mapped elementwise.
    pub fn map_values(&self, f: impl Fn(&T) -> T) -> Self {
        let nodes = self
            .nodes
            .iter()
            .map(|n| match n {
                DiagramNode::Value(v) => DiagramNode::Value(ValueNode {
                    name: v.name.clone(),
                    parents: v.parents.clone(),
                    table: v.table.iter().map(&f).collect(),
                }),
                other => other.clone(),
            })
            .collect();
        Self::new(self.name.clone(), nodes)
    }
}
