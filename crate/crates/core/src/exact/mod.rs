//! Exact posterior queries on belief networks.
//!
//! Two engines answer the same contract: [`Enumeration`] sums the full joint
//! and serves as the reference oracle, [`VariableElimination`] prunes barren
//! nodes, absorbs evidence by slicing and sums out the remaining hidden
//! variables in min-fill order.

mod elimination;
mod enumeration;
mod factor;
mod ordering;
mod prune;

use std::sync::atomic::{AtomicUsize, Ordering};

use serde::Serialize;

pub use factor::Factor;
pub use ordering::min_fill_order;
pub use prune::prune_barren;

use crate::error::{Error, Result};
use crate::model::{configurations, BeliefNetwork, Evidence, Structure};
use crate::scalar::Scalar;

/// Posterior over one variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryResult<T = f64> {
    pub target: String,
    pub states: Vec<String>,
    pub distribution: Vec<T>,
    pub evidence_probability: T,
}

impl<T: Scalar> QueryResult<T> {
    pub fn probability_of(&self, state: &str) -> Option<T> {
        let i = self.states.iter().position(|s| s == state)?;
        Some(self.distribution[i].clone())
    }
}

/// Posterior over several variables jointly, row-major over `variables`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution<T = f64> {
    pub variables: Vec<String>,
    pub states: Vec<Vec<String>>,
    pub table: Vec<T>,
    pub evidence_probability: T,
}

impl<T: Scalar> JointDistribution<T> {
    pub fn cards(&self) -> Vec<usize> {
        self.states.iter().map(Vec::len).collect()
    }

    /// Every configuration (as evidence) with its probability, in row order.
    pub fn entries(&self) -> impl Iterator<Item = (Evidence, &T)> + '_ {
        configurations(&self.cards())
            .zip(&self.table)
            .map(move |(config, p)| (self.as_evidence(&config), p))
    }

    pub fn as_evidence(&self, config: &[usize]) -> Evidence {
        self.variables
            .iter()
            .zip(config)
            .enumerate()
            .map(|(k, (v, &s))| (v.clone(), self.states[k][s].clone()))
            .collect()
    }

    /// Probability of a configuration given as evidence over `variables`.
    pub fn probability(&self, config: &Evidence) -> Result<T> {
        let mut index = 0;
        for (k, v) in self.variables.iter().enumerate() {
            let label = config
                .get(v)
                .ok_or_else(|| Error::usage(format!("configuration lacks `{v}`")))?;
            let s = self.states[k]
                .iter()
                .position(|x| x == label)
                .ok_or_else(|| Error::UnknownState {
                    node: v.clone(),
                    state: label.to_string(),
                })?;
            index = index * self.states[k].len() + s;
        }
        Ok(self.table[index].clone())
    }
}

/// Anything that can answer posterior queries on a belief network.
pub trait InferenceEngine<T: Scalar> {
    /// Joint posterior of `targets` given `evidence`.
    fn joint(
        &self,
        network: &BeliefNetwork<T>,
        targets: &[&str],
        evidence: &Evidence,
    ) -> Result<JointDistribution<T>>;

    fn posterior(
        &self,
        network: &BeliefNetwork<T>,
        target: &str,
        evidence: &Evidence,
    ) -> Result<QueryResult<T>> {
        let joint = self.joint(network, &[target], evidence)?;
        Ok(QueryResult {
            target: target.to_string(),
            states: joint.states.into_iter().next().unwrap_or_default(),
            distribution: joint.table,
            evidence_probability: joint.evidence_probability,
        })
    }
}

impl<T: Scalar, E: InferenceEngine<T> + ?Sized> InferenceEngine<T> for &E {
    fn joint(
        &self,
        network: &BeliefNetwork<T>,
        targets: &[&str],
        evidence: &Evidence,
    ) -> Result<JointDistribution<T>> {
        (**self).joint(network, targets, evidence)
    }

    fn posterior(
        &self,
        network: &BeliefNetwork<T>,
        target: &str,
        evidence: &Evidence,
    ) -> Result<QueryResult<T>> {
        (**self).posterior(network, target, evidence)
    }
}

/// Brute-force summation over the full joint distribution.
#[derive(Debug, Clone, Copy, Default)]
pub struct Enumeration;

/// Variable elimination with barren pruning and min-fill ordering.
#[derive(Debug, Clone, Copy, Default)]
pub struct VariableElimination;

impl<T: Scalar> InferenceEngine<T> for Enumeration {
    fn joint(
        &self,
        network: &BeliefNetwork<T>,
        targets: &[&str],
        evidence: &Evidence,
    ) -> Result<JointDistribution<T>> {
        let query = Query::resolve(network, targets, evidence)?;
        let table = enumeration::joint(network, &query.structure, &query.targets, &query.assignment);
        query.finish(network, table)
    }
}

impl<T: Scalar> InferenceEngine<T> for VariableElimination {
    fn joint(
        &self,
        network: &BeliefNetwork<T>,
        targets: &[&str],
        evidence: &Evidence,
    ) -> Result<JointDistribution<T>> {
        let query = Query::resolve(network, targets, evidence)?;
        let table = elimination::joint(network, &query.structure, &query.targets, &query.assignment);
        query.finish(network, table)
    }
}

/// Wraps an engine and counts the queries it answers.
#[derive(Debug, Default)]
pub struct CountingEngine<E> {
    inner: E,
    queries: AtomicUsize,
}

impl<E> CountingEngine<E> {
    pub fn new(inner: E) -> Self {
        Self {
            inner,
            queries: AtomicUsize::new(0),
        }
    }

    pub fn queries(&self) -> usize {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }
}

impl<T: Scalar, E: InferenceEngine<T>> InferenceEngine<T> for CountingEngine<E> {
    fn joint(
        &self,
        network: &BeliefNetwork<T>,
        targets: &[&str],
        evidence: &Evidence,
    ) -> Result<JointDistribution<T>> {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.inner.joint(network, targets, evidence)
    }

    fn posterior(
        &self,
        network: &BeliefNetwork<T>,
        target: &str,
        evidence: &Evidence,
    ) -> Result<QueryResult<T>> {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.inner.posterior(network, target, evidence)
    }
}

struct Query {
    structure: Structure,
    targets: Vec<usize>,
    assignment: Vec<Option<usize>>,
}

impl Query {
    fn resolve<T: Scalar>(network: &BeliefNetwork<T>, targets: &[&str], evidence: &Evidence) -> Result<Self> {
        let structure = network.structure()?;
        let assignment = evidence.resolve(network)?;
        let mut resolved = Vec::with_capacity(targets.len());
        for t in targets {
            let i = network.require(t)?;
            if assignment[i].is_some() {
                return Err(Error::TargetInEvidence(t.to_string()));
            }
            if resolved.contains(&i) {
                return Err(Error::usage(format!("target `{t}` listed twice")));
            }
            resolved.push(i);
        }
        Ok(Self {
            structure,
            targets: resolved,
            assignment,
        })
    }

    /// Normalizes an unnormalized joint `P(targets, E)`.
    fn finish<T: Scalar>(self, network: &BeliefNetwork<T>, table: Vec<T>) -> Result<JointDistribution<T>> {
        let evidence_probability = table.iter().fold(T::zero(), |acc, p| acc + p.clone());
        if evidence_probability.is_zero() {
            return Err(Error::ImpossibleEvidence);
        }
        let table = table
            .into_iter()
            .map(|p| p / evidence_probability.clone())
            .collect();
        let nodes = network.nodes();
        Ok(JointDistribution {
            variables: self.targets.iter().map(|&i| nodes[i].name.clone()).collect(),
            states: self.targets.iter().map(|&i| nodes[i].states.clone()).collect(),
            table,
            evidence_probability,
        })
    }
}

/// `P(target | evidence)` by full enumeration.
pub fn query_enumeration<T: Scalar>(
    network: &BeliefNetwork<T>,
    target: &str,
    evidence: &Evidence,
) -> Result<QueryResult<T>> {
    Enumeration.posterior(network, target, evidence)
}

/// `P(target | evidence)` by variable elimination.
pub fn query_ve<T: Scalar>(
    network: &BeliefNetwork<T>,
    target: &str,
    evidence: &Evidence,
) -> Result<QueryResult<T>> {
    VariableElimination.posterior(network, target, evidence)
}

/// `P(S = config | evidence)` using one elimination with a joint target.
pub fn joint_config_probability<T: Scalar>(
    network: &BeliefNetwork<T>,
    config: &Evidence,
    evidence: &Evidence,
) -> Result<T> {
    let targets: Vec<&str> = config.iter().map(|(n, _)| n).collect();
    VariableElimination
        .joint(network, &targets, evidence)?
        .probability(config)
}

/// `P(S = config | evidence)` as a product of single-variable posteriors,
/// conditioning on each assigned variable before querying the next.
pub fn joint_config_probability_chain<T: Scalar, E: InferenceEngine<T>>(
    network: &BeliefNetwork<T>,
    config: &Evidence,
    evidence: &Evidence,
    engine: &E,
) -> Result<T> {
    let mut conditioning = evidence.clone();
    let mut product = T::one();
    if config.is_empty() {
        // still reject impossible evidence
        engine.joint(network, &[], evidence)?;
        return Ok(product);
    }
    for (node, state) in config.iter() {
        if product.is_zero() {
            break;
        }
        let posterior = engine.posterior(network, node, &conditioning)?;
        let p = posterior.probability_of(state).ok_or_else(|| Error::UnknownState {
            node: node.to_string(),
            state: state.to_string(),
        })?;
        product = product * p;
        conditioning.bind(node, state)?;
    }
    Ok(product)
}
