//! Maximum-expected-value decisions on compiled problems.
//!
//! A single remaining decision is settled by one query per alternative:
//! the best alternative maximizes `P(V = T | alternative, E)` and its value
//! is `k1 * P - k2` ([`mev_single`]). Several remaining decisions go through
//! the recursion in [`solver`], which alternates a max over the current
//! decision with an expectation over what the next decision gets to see
//! ([`mev`], [`extract_policy`]). [`oracle_decision_tree`] solves the same
//! problem directly on the untransformed diagram and is used to check the
//! compiled route.
//!
//! Ties between alternatives go to the first declared one.

mod oracle;
mod prepare;
pub mod solver;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

pub use oracle::oracle_decision_tree;
pub use prepare::{prepare_decision, PreparedDecision};
pub use solver::{MemoTable, StageValue};

use crate::error::{Error, Result};
use crate::exact::{CountingEngine, InferenceEngine};
use crate::model::Evidence;
use crate::scalar::{argmax_with_ties, format_fixed, Scalar};
use crate::transform::CompiledDecisionProblem;
use solver::Solver;

/// Best alternative for the first remaining decision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionOutcome<T = f64> {
    pub decision: String,
    /// Maximum expected value, in value units.
    pub mev: T,
    pub first_decision: String,
    /// Expected value of each alternative, in declaration order.
    pub per_alternative: Vec<(String, T)>,
}

impl<T: Scalar> DecisionOutcome<T> {
    pub fn value_of(&self, alternative: &str) -> Option<&T> {
        self.per_alternative
            .iter()
            .find(|(a, _)| a == alternative)
            .map(|(_, v)| v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyEntry<T = f64> {
    pub alternative: String,
    /// Expected value at this information state, in value units.
    pub expected_value: T,
}

/// The optimal choice of one decision at each reachable information state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionRule<T = f64> {
    pub decision: String,
    /// Information predecessors not fixed by the initial evidence; these
    /// are the variables that key `entries`.
    pub predecessors: Vec<String>,
    pub entries: BTreeMap<Evidence, PolicyEntry<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Policy<T = f64> {
    pub rules: Vec<DecisionRule<T>>,
}

impl<T: Scalar> Policy<T> {
    pub fn rule(&self, decision: &str) -> Option<&DecisionRule<T>> {
        self.rules.iter().find(|r| r.decision == decision)
    }

    pub fn lookup(&self, decision: &str, state: &Evidence) -> Option<&PolicyEntry<T>> {
        self.rule(decision)?.entries.get(state)
    }
}

impl<T: Scalar> fmt::Display for Policy<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{} [{}]:", rule.decision, rule.predecessors.join(", "))?;
            for (state, entry) in &rule.entries {
                let state = if state.is_empty() {
                    "()".to_string()
                } else {
                    state.to_string()
                };
                writeln!(
                    f,
                    "  {state} -> {} (EV {})",
                    entry.alternative,
                    format_fixed(entry.expected_value.to_f64_lossy())
                )?;
            }
        }
        Ok(())
    }
}

/// Outcome and policy of one solve.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<T = f64> {
    pub outcome: DecisionOutcome<T>,
    pub policy: Policy<T>,
}

/// Single remaining decision: one `P(V = T | alternative, E)` query per
/// alternative.
pub fn mev_single<T: Scalar, E: InferenceEngine<T>>(
    problem: &CompiledDecisionProblem<T>,
    evidence: &Evidence,
    engine: &E,
) -> Result<DecisionOutcome<T>> {
    let prepared = prepare_decision(problem, evidence, &Evidence::new())?;
    if prepared.remaining.len() != 1 {
        return Err(Error::usage(format!(
            "{} decisions remain; a single-decision solve needs exactly one",
            prepared.remaining.len()
        )));
    }
    let decision = prepared.first().decision.clone();
    let alternatives = problem
        .alternatives(&decision)
        .ok_or_else(|| Error::UnknownNode(decision.clone()))?;
    let mut probabilities = Vec::with_capacity(alternatives.len());
    for alt in alternatives {
        let posterior = engine.posterior(
            &problem.network,
            &problem.value_node,
            &prepared.evidence.with(decision.clone(), alt.clone()),
        )?;
        probabilities.push(posterior.probability_of("T").expect("value node has state T"));
    }
    let best = argmax_with_ties(&probabilities, &T::tie_epsilon()).expect("alternatives");
    Ok(DecisionOutcome {
        decision,
        mev: problem.expected_value(&probabilities[best]),
        first_decision: alternatives[best].clone(),
        per_alternative: alternatives
            .iter()
            .cloned()
            .zip(probabilities.iter().map(|p| problem.expected_value(p)))
            .collect(),
    })
}

/// `f` for the prepared decision sequence, filling `memo` as it goes.
pub fn mev_recursive<T: Scalar, E: InferenceEngine<T>>(
    problem: &CompiledDecisionProblem<T>,
    prepared: &PreparedDecision,
    memo: &mut MemoTable<T>,
    engine: &E,
) -> Result<T> {
    let solver = Solver {
        problem,
        prepared,
        engine,
    };
    Ok(solver.evaluate(0, &prepared.evidence, Some(memo))?.value)
}

/// Solves the remaining decisions; `memoize = false` recomputes shared
/// intermediate results instead of storing them.
pub fn solve<T: Scalar, E: InferenceEngine<T>>(
    problem: &CompiledDecisionProblem<T>,
    evidence: &Evidence,
    hypotheticals: &Evidence,
    engine: &E,
    memoize: bool,
) -> Result<Solution<T>> {
    let prepared = prepare_decision(problem, evidence, hypotheticals)?;
    let solver = Solver {
        problem,
        prepared: &prepared,
        engine,
    };
    let (top, policy) = solver.solve(memoize)?;
    Ok(Solution {
        outcome: solver.outcome(&top)?,
        policy,
    })
}

/// Maximum expected value and best first alternative.
pub fn mev<T: Scalar, E: InferenceEngine<T>>(
    problem: &CompiledDecisionProblem<T>,
    evidence: &Evidence,
    hypotheticals: &Evidence,
    engine: &E,
) -> Result<DecisionOutcome<T>> {
    Ok(solve(problem, evidence, hypotheticals, engine, true)?.outcome)
}

/// Decision rules for every remaining decision, with uninstantiated
/// predecessors of the first decision dropped.
pub fn extract_policy<T: Scalar, E: InferenceEngine<T>>(
    problem: &CompiledDecisionProblem<T>,
    evidence: &Evidence,
    engine: &E,
) -> Result<Policy<T>> {
    Ok(solve(problem, evidence, &Evidence::new(), engine, true)?.policy)
}

/// Like [`extract_policy`], but the first decision's uninstantiated chance
/// predecessors are instantiated hypothetically, once per positive-probability
/// assignment, so its rule is contingent on them too.
pub fn contingent_policy<T: Scalar, E: InferenceEngine<T>>(
    problem: &CompiledDecisionProblem<T>,
    evidence: &Evidence,
    engine: &E,
) -> Result<Policy<T>> {
    let prepared = prepare_decision(problem, evidence, &Evidence::new())?;
    let head = problem
        .decisions
        .entry(&prepared.first().decision)
        .expect("remaining decision is listed");
    let open: Vec<&str> = head
        .chance_predecessors
        .iter()
        .filter(|p| !evidence.contains(p))
        .map(String::as_str)
        .collect();
    if open.is_empty() {
        return extract_policy(problem, evidence, engine);
    }
    let joint = engine.joint(&problem.network, &open, evidence)?;
    let mut merged: Option<Policy<T>> = None;
    for (assignment, p) in joint.entries() {
        if p.is_zero() {
            continue;
        }
        let policy = solve(problem, evidence, &assignment, engine, true)?.policy;
        match merged.as_mut() {
            None => merged = Some(policy),
            Some(acc) => {
                for (into, from) in acc.rules.iter_mut().zip(policy.rules) {
                    into.entries.extend(from.entries);
                }
            }
        }
    }
    Ok(merged.expect("some assignment has positive probability"))
}

/// Engine queries issued with and without memoization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryCountReport<T = f64> {
    pub with_memo: usize,
    pub without_memo: usize,
    pub mev_with_memo: T,
    pub mev_without_memo: T,
}

impl<T> QueryCountReport<T> {
    pub fn ratio(&self) -> f64 {
        self.without_memo as f64 / self.with_memo.max(1) as f64
    }
}

/// Solves twice, memo on and off, counting engine queries.
pub fn query_count_report<T: Scalar, E: InferenceEngine<T>>(
    problem: &CompiledDecisionProblem<T>,
    evidence: &Evidence,
    engine: &E,
) -> Result<QueryCountReport<T>> {
    let counter = CountingEngine::new(engine);
    let on = solve(problem, evidence, &Evidence::new(), &counter, true)?;
    let with_memo = counter.queries();
    counter.reset();
    let off = solve(problem, evidence, &Evidence::new(), &counter, false)?;
    let without_memo = counter.queries();
    debug_assert_eq!(on.policy.rules.len(), off.policy.rules.len());
    Ok(QueryCountReport {
        with_memo,
        without_memo,
        mev_with_memo: on.outcome.mev,
        mev_without_memo: off.outcome.mev,
    })
}
