use std::collections::HashMap;

use serde::Serialize;

use super::graph::kahn_order;
use super::node::ChanceNode;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A directed acyclic graph of chance nodes.
///
/// Construction does not validate; call [`validate_bn`](super::validate_bn)
/// for a full report. Inference routines resolve the structure on entry and
/// fail with a structural error if references dangle or a cycle exists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BeliefNetwork<T = f64> {
    name: String,
    nodes: Vec<ChanceNode<T>>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

/// Parent indices, cardinalities and a topological order of a network.
#[derive(Debug, Clone)]
pub(crate) struct Structure {
    pub parents: Vec<Vec<usize>>,
    pub cards: Vec<usize>,
    pub order: Vec<usize>,
}

impl<T: Scalar> BeliefNetwork<T> {
    pub fn new(name: impl Into<String>, nodes: Vec<ChanceNode<T>>) -> Self {
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            index.entry(node.name.clone()).or_insert(i);
        }
        Self {
            name: name.into(),
            nodes,
            index,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nodes(&self) -> &[ChanceNode<T>] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn node(&self, name: &str) -> Option<&ChanceNode<T>> {
        self.index_of(name).map(|i| &self.nodes[i])
    }

    pub(crate) fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub(crate) fn state_of(&self, node: usize, state: &str) -> Result<usize> {
        self.nodes[node]
            .state_index(state)
            .ok_or_else(|| Error::UnknownState {
                node: self.nodes[node].name.clone(),
                state: state.to_string(),
            })
    }

    /// Replaces the node with the same name, keeping its position.
    pub fn with_node(&self, node: ChanceNode<T>) -> Result<Self> {
        let at = self.require(&node.name)?;
        let mut nodes = self.nodes.clone();
        nodes[at] = node;
        Ok(Self::new(self.name.clone(), nodes))
    }

    pub(crate) fn structure(&self) -> Result<Structure> {
        let parents = self
            .nodes
            .iter()
            .map(|n| n.parents.iter().map(|p| self.require(p)).collect())
            .collect::<Result<Vec<Vec<usize>>>>()?;
        let cards = self.nodes.iter().map(|n| n.states.len()).collect();
        let order =
            kahn_order(&parents).map_err(|stuck| Error::Cycle(self.nodes[stuck].name.clone()))?;
        Ok(Structure {
            parents,
            cards,
            order,
        })
    }

    /// Node names ordered so every node follows its parents; ties go to
    /// declaration order.
    pub fn topological_order(&self) -> Result<Vec<String>> {
        let s = self.structure()?;
        Ok(s.order
            .into_iter()
            .map(|i| self.nodes[i].name.clone())
            .collect())
    }
}

/// Free-function form of [`BeliefNetwork::topological_order`].
pub fn topological_order<T: Scalar>(network: &BeliefNetwork<T>) -> Result<Vec<String>> {
    network.topological_order()
}
