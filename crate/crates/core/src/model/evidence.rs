use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::network::BeliefNetwork;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A partial assignment of node names to state (or alternative) labels.
///
/// Decisions that have already been made are ordinary entries.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Evidence(BTreeMap<String, String>);

impl Evidence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds evidence from pairs; a repeated node is an error.
    pub fn from_pairs<N: Into<String>, S: Into<String>>(
        pairs: impl IntoIterator<Item = (N, S)>,
    ) -> Result<Self> {
        let mut evidence = Self::new();
        for (node, state) in pairs {
            evidence.bind(node, state)?;
        }
        Ok(evidence)
    }

    /// Adds a binding; binding the same node twice is an error.
    pub fn bind(&mut self, node: impl Into<String>, state: impl Into<String>) -> Result<()> {
        let node = node.into();
        if self.0.contains_key(&node) {
            return Err(Error::DuplicateBinding(node));
        }
        self.0.insert(node, state.into());
        Ok(())
    }

    /// Adds or overwrites a binding.
    pub fn set(&mut self, node: impl Into<String>, state: impl Into<String>) {
        self.0.insert(node.into(), state.into());
    }

    pub fn remove(&mut self, node: &str) -> Option<String> {
        self.0.remove(node)
    }

    pub fn with(&self, node: impl Into<String>, state: impl Into<String>) -> Self {
        let mut out = self.clone();
        out.set(node, state);
        out
    }

    /// Union of two evidence sets; a node bound in both is an error.
    pub fn merged(&self, other: &Evidence) -> Result<Self> {
        let mut out = self.clone();
        for (n, s) in other.iter() {
            out.bind(n, s)?;
        }
        Ok(out)
    }

    pub fn get(&self, node: &str) -> Option<&str> {
        self.0.get(node).map(String::as_str)
    }

    pub fn contains(&self, node: &str) -> bool {
        self.0.contains_key(node)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(n, s)| (n.as_str(), s.as_str()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses `Name=state`.
    pub fn parse_binding(text: &str) -> Result<(String, String)> {
        let (node, state) = text
            .split_once('=')
            .ok_or_else(|| Error::usage(format!("expected Name=state, got `{text}`")))?;
        let (node, state) = (node.trim(), state.trim());
        if node.is_empty() || state.is_empty() {
            return Err(Error::usage(format!("expected Name=state, got `{text}`")));
        }
        Ok((node.to_string(), state.to_string()))
    }

    /// Resolves against a network: `Some(state index)` per bound node.
    pub(crate) fn resolve<T: Scalar>(&self, network: &BeliefNetwork<T>) -> Result<Vec<Option<usize>>> {
        let mut assignment = vec![None; network.len()];
        for (node, state) in self.iter() {
            let i = network.require(node)?;
            assignment[i] = Some(network.state_of(i, state)?);
        }
        Ok(assignment)
    }
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, s) in self.iter() {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{n}={s}")?;
        }
        Ok(())
    }
}

impl FromIterator<(String, String)> for Evidence {
    /// Later pairs overwrite earlier ones; use [`Evidence::from_pairs`] for
    /// strict construction.
    fn from_iter<I: IntoIterator<Item = (String, String)>>(iter: I) -> Self {
        Evidence(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<(&'a str, &'a str)> for Evidence {
    fn from_iter<I: IntoIterator<Item = (&'a str, &'a str)>>(iter: I) -> Self {
        Evidence(iter.into_iter().map(|(n, s)| (n.to_string(), s.to_string())).collect())
    }
}
