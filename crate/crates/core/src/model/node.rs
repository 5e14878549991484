use serde::Serialize;

use crate::scalar::Scalar;

/// A discrete random variable with a conditional probability table.
///
/// `cpt` holds one row per configuration of `parents`, addressed in
/// mixed-radix order over the parents' state lists (last parent varies
/// fastest). Each row is a distribution over `states`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChanceNode<T = f64> {
    pub name: String,
    pub states: Vec<String>,
    pub parents: Vec<String>,
    pub cpt: Vec<Vec<T>>,
}

impl<T: Scalar> ChanceNode<T> {
    pub fn new(
        name: impl Into<String>,
        states: &[&str],
        parents: &[&str],
        cpt: Vec<Vec<T>>,
    ) -> Self {
        Self {
            name: name.into(),
            states: states.iter().map(|s| s.to_string()).collect(),
            parents: parents.iter().map(|s| s.to_string()).collect(),
            cpt,
        }
    }

    /// Parentless node with the given prior.
    pub fn root(name: impl Into<String>, states: &[&str], prior: Vec<T>) -> Self {
        Self::new(name, states, &[], vec![prior])
    }

    pub fn state_index(&self, state: &str) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }
}

/// A choice made by the decision maker after observing `observes`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecisionNode {
    pub name: String,
    pub alternatives: Vec<String>,
    pub observes: Vec<String>,
}

impl DecisionNode {
    pub fn new(name: impl Into<String>, alternatives: &[&str], observes: &[&str]) -> Self {
        Self {
            name: name.into(),
            alternatives: alternatives.iter().map(|s| s.to_string()).collect(),
            observes: observes.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn alternative_index(&self, alternative: &str) -> Option<usize> {
        self.alternatives.iter().position(|a| a == alternative)
    }
}

/// The terminal value node: a real-valued function of its parents.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueNode<T = f64> {
    pub name: String,
    pub parents: Vec<String>,
    pub table: Vec<T>,
}

impl<T: Scalar> ValueNode<T> {
    pub fn new(name: impl Into<String>, parents: &[&str], table: Vec<T>) -> Self {
        Self {
            name: name.into(),
            parents: parents.iter().map(|s| s.to_string()).collect(),
            table,
        }
    }
}

/// Row index of a parent configuration (last position varies fastest).
pub fn config_index(config: &[usize], cards: &[usize]) -> usize {
    debug_assert_eq!(config.len(), cards.len());
    config
        .iter()
        .zip(cards)
        .fold(0, |acc, (&state, &card)| acc * card + state)
}

/// Number of configurations of variables with the given cardinalities.
pub fn config_count(cards: &[usize]) -> usize {
    cards.iter().product()
}

/// Every configuration of `cards` in row order.
pub fn configurations(cards: &[usize]) -> Configurations {
    Configurations {
        cards: cards.to_vec(),
        next: if cards.contains(&0) {
            None
        } else {
            Some(vec![0; cards.len()])
        },
    }
}

#[derive(Debug, Clone)]
pub struct Configurations {
    cards: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Iterator for Configurations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = succ.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < self.cards[pos] {
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(current)
    }
}
