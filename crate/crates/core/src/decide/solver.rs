//! The expected-value recursion over the compiled network.
//!
//! For the remaining decisions `d = (D_i, ..., D_n)` and evidence `e`:
//!
//! ```text
//! f(d, e) = max_{a in D_i} sum_w f(tail d, e + a + w) * P(w | a, e)
//! ```
//!
//! where `w` ranges over the chance predecessors of the next decision that
//! `e` leaves uninstantiated. For the last decision the inner sum is the
//! single query `P(V = T | e + a)`. Values stay on the probability scale
//! and are mapped to value units once, as `k1 * f - k2`.

use std::collections::{BTreeMap, HashMap};

use super::prepare::PreparedDecision;
use super::{DecisionOutcome, DecisionRule, Policy, PolicyEntry};
use crate::error::{Error, Result};
use crate::exact::InferenceEngine;
use crate::model::Evidence;
use crate::scalar::{argmax_with_ties, Scalar};
use crate::transform::CompiledDecisionProblem;

/// Result of one stage of the recursion at one information state.
#[derive(Debug, Clone, PartialEq)]
pub struct StageValue<T> {
    /// `f` at this state, in `[0, 1]`.
    pub value: T,
    /// Index of the maximizing alternative (first declared among ties).
    pub best: usize,
    /// `f` restricted to each alternative.
    pub per_alternative: Vec<T>,
}

/// Cached stage values keyed by decision index and the assignment of that
/// decision's predecessors not fixed by the initial evidence.
#[derive(Debug, Clone, Default)]
pub struct MemoTable<T> {
    entries: HashMap<(usize, Evidence), StageValue<T>>,
}

impl<T: Scalar> MemoTable<T> {
    pub fn new() -> Self {
        Self {
            entries: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, stage: usize, key: &Evidence) -> Option<&StageValue<T>> {
        self.entries.get(&(stage, key.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, Evidence), &StageValue<T>)> {
        self.entries.iter()
    }

    /// First insertion wins; a repeated key carries an identical value.
    fn insert(&mut self, stage: usize, key: Evidence, value: StageValue<T>) {
        self.entries.entry((stage, key)).or_insert(value);
    }
}

pub(crate) struct Solver<'a, T, E> {
    pub problem: &'a CompiledDecisionProblem<T>,
    pub prepared: &'a PreparedDecision,
    pub engine: &'a E,
}

impl<T: Scalar, E: InferenceEngine<T>> Solver<'_, T, E> {
    fn alternatives(&self, stage: usize) -> Result<&[String]> {
        let name = &self.prepared.remaining[stage].decision;
        self.problem
            .alternatives(name)
            .ok_or_else(|| Error::UnknownNode(name.clone()))
    }

    /// Names of the predecessors of `stage` that are not fixed initially.
    pub fn open_predecessors(&self, stage: usize) -> Vec<String> {
        self.prepared.remaining[stage]
            .predecessors
            .iter()
            .filter(|p| !self.prepared.base.contains(p))
            .cloned()
            .collect()
    }

    /// The information state of `stage` as read from `evidence`.
    pub fn key(&self, stage: usize, evidence: &Evidence) -> Evidence {
        self.open_predecessors(stage)
            .into_iter()
            .filter_map(|p| evidence.get(&p).map(|s| (p.clone(), s.to_string())))
            .collect()
    }

    /// Chance predecessors of `stage + 1` that `evidence` leaves open.
    fn next_observations(&self, stage: usize, evidence: &Evidence) -> Option<Vec<String>> {
        let next = self.prepared.remaining.get(stage + 1)?;
        Some(
            next.chance_predecessors
                .iter()
                .filter(|p| !evidence.contains(p))
                .cloned()
                .collect(),
        )
    }

    /// Positive-probability observation branches after choosing into
    /// `evidence`; `None` when `stage` is the last decision.
    fn branches(&self, stage: usize, evidence: &Evidence) -> Result<Option<Vec<(Evidence, T)>>> {
        let Some(open) = self.next_observations(stage, evidence) else {
            return Ok(None);
        };
        if open.is_empty() {
            return Ok(Some(vec![(evidence.clone(), T::one())]));
        }
        let targets: Vec<&str> = open.iter().map(String::as_str).collect();
        let joint = self.engine.joint(&self.problem.network, &targets, evidence)?;
        let mut out = Vec::new();
        for (w, p) in joint.entries() {
            // zero-weight branches are never conditioned on
            if !p.is_zero() {
                out.push((evidence.merged(&w)?, p.clone()));
            }
        }
        Ok(Some(out))
    }

    fn value_given_true(&self, evidence: &Evidence) -> Result<T> {
        let posterior = self
            .engine
            .posterior(&self.problem.network, &self.problem.value_node, evidence)?;
        posterior
            .probability_of("T")
            .ok_or_else(|| Error::UnknownState {
                node: self.problem.value_node.clone(),
                state: "T".into(),
            })
    }

    /// `f` at `stage` under `evidence`, optionally through `memo`.
    pub fn evaluate(
        &self,
        stage: usize,
        evidence: &Evidence,
        mut memo: Option<&mut MemoTable<T>>,
    ) -> Result<StageValue<T>> {
        let key = self.key(stage, evidence);
        if let Some(hit) = memo.as_deref().and_then(|m| m.get(stage, &key)) {
            return Ok(hit.clone());
        }
        let decision = &self.prepared.remaining[stage].decision;
        let mut per_alternative = Vec::new();
        for alt in self.alternatives(stage)? {
            let chosen = evidence.with(decision.clone(), alt.clone());
            let value = match self.branches(stage, &chosen)? {
                None => self.value_given_true(&chosen)?,
                Some(branches) => {
                    let mut total = T::zero();
                    for (next, weight) in branches {
                        let child = self.evaluate(stage + 1, &next, memo.as_deref_mut())?;
                        total = total + child.value * weight;
                    }
                    total
                }
            };
            per_alternative.push(value);
        }
        let best = argmax_with_ties(&per_alternative, &T::tie_epsilon()).expect("at least one alternative");
        let result = StageValue {
            value: per_alternative[best].clone(),
            best,
            per_alternative,
        };
        if let Some(m) = memo {
            m.insert(stage, key, result.clone());
        }
        Ok(result)
    }

    /// Solves from the first remaining decision and records the decision
    /// rule at every reachable information state.
    ///
    /// With `memoize`, each state is solved once and the rules are read off
    /// the memo table. Without it, every state visited while building the
    /// rules re-runs the recursion below it from scratch.
    pub fn solve(&self, memoize: bool) -> Result<(StageValue<T>, Policy<T>)> {
        let mut rules: Vec<DecisionRule<T>> = (0..self.prepared.remaining.len())
            .map(|stage| DecisionRule {
                decision: self.prepared.remaining[stage].decision.clone(),
                predecessors: self.open_predecessors(stage),
                entries: BTreeMap::new(),
            })
            .collect();
        let top = if memoize {
            let mut memo = MemoTable::new();
            let top = self.evaluate(0, &self.prepared.evidence, Some(&mut memo))?;
            for ((stage, key), value) in memo.iter() {
                rules[*stage]
                    .entries
                    .insert(key.clone(), self.entry(*stage, value)?);
            }
            top
        } else {
            self.walk(0, &self.prepared.evidence, &mut rules)?
        };
        Ok((top, Policy { rules }))
    }

    fn walk(&self, stage: usize, evidence: &Evidence, rules: &mut [DecisionRule<T>]) -> Result<StageValue<T>> {
        let here = self.evaluate(stage, evidence, None)?;
        rules[stage]
            .entries
            .insert(self.key(stage, evidence), self.entry(stage, &here)?);
        let decision = &self.prepared.remaining[stage].decision;
        for alt in self.alternatives(stage)? {
            let chosen = evidence.with(decision.clone(), alt.clone());
            if let Some(branches) = self.branches(stage, &chosen)? {
                for (next, _) in branches {
                    self.walk(stage + 1, &next, rules)?;
                }
            }
        }
        Ok(here)
    }

    fn entry(&self, stage: usize, value: &StageValue<T>) -> Result<PolicyEntry<T>> {
        Ok(PolicyEntry {
            alternative: self.alternatives(stage)?[value.best].clone(),
            expected_value: self.problem.expected_value(&value.value),
        })
    }

    pub fn outcome(&self, top: &StageValue<T>) -> Result<DecisionOutcome<T>> {
        let alternatives = self.alternatives(0)?;
        Ok(DecisionOutcome {
            decision: self.prepared.remaining[0].decision.clone(),
            mev: self.problem.expected_value(&top.value),
            first_decision: alternatives[top.best].clone(),
            per_alternative: alternatives
                .iter()
                .cloned()
                .zip(top.per_alternative.iter().map(|f| self.problem.expected_value(f)))
                .collect(),
        })
    }
}
