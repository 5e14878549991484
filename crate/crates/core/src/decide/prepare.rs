use crate::error::{Error, Result};
use crate::model::graph::descendants_closure;
use crate::model::Evidence;
use crate::scalar::Scalar;
use crate::transform::{CompiledDecisionProblem, DecisionEntry};

/// A decision problem ready for the recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedDecision {
    /// Remaining decisions in order. The first entry keeps only the
    /// predecessors that are instantiated.
    pub remaining: Vec<DecisionEntry>,
    /// Evidence with hypotheticals merged in.
    pub evidence: Evidence,
    /// Evidence as supplied, without hypotheticals.
    pub base: Evidence,
}

impl PreparedDecision {
    pub fn first(&self) -> &DecisionEntry {
        &self.remaining[0]
    }
}

/// Readies a problem for solving under `evidence`.
///
/// Decisions already made must appear in `evidence` and form a prefix of
/// the decision order. `hypotheticals` may instantiate uninstantiated chance
/// predecessors of the first remaining decision; whatever stays
/// uninstantiated is dropped from that decision's information set.
pub fn prepare_decision<T: Scalar>(
    problem: &CompiledDecisionProblem<T>,
    evidence: &Evidence,
    hypotheticals: &Evidence,
) -> Result<PreparedDecision> {
    let network = &problem.network;
    evidence.resolve(network)?;
    hypotheticals.resolve(network)?;
    if evidence.contains(&problem.value_node) || hypotheticals.contains(&problem.value_node) {
        return Err(Error::usage(format!(
            "the value node `{}` cannot be evidence",
            problem.value_node
        )));
    }

    let entries = &problem.decisions.entries;
    let first = entries
        .iter()
        .position(|e| !evidence.contains(&e.decision))
        .ok_or_else(|| Error::usage("every decision has already been made"))?;
    if let Some(late) = entries[first..].iter().find(|e| evidence.contains(&e.decision)) {
        return Err(Error::usage(format!(
            "decision `{}` is recorded before `{}` was made",
            late.decision, entries[first].decision
        )));
    }

    let head = &entries[first];
    for (node, _) in hypotheticals.iter() {
        if !head.chance_predecessors.iter().any(|p| p == node) {
            return Err(Error::usage(format!(
                "`{node}` is not a chance predecessor of `{}`",
                head.decision
            )));
        }
        if evidence.contains(node) {
            return Err(Error::DuplicateBinding(node.to_string()));
        }
    }
    let merged = evidence.merged(hypotheticals)?;

    // Evidence must not depend on a decision that has not been made yet.
    let structure = network.structure()?;
    let pending: Vec<usize> = entries[first..]
        .iter()
        .map(|e| network.require(&e.decision))
        .collect::<Result<_>>()?;
    for &d in &pending {
        let downstream = descendants_closure(&structure.parents, [d]);
        for (node, _) in merged.iter() {
            let i = network.require(node)?;
            if i != d && downstream[i] {
                return Err(Error::usage(format!(
                    "evidence on `{node}` depends on `{}`, which has not been made",
                    network.nodes()[d].name
                )));
            }
        }
    }

    let keep = |list: &[String]| -> Vec<String> {
        list.iter().filter(|p| merged.contains(p)).cloned().collect()
    };
    let mut remaining = entries[first..].to_vec();
    remaining[0].predecessors = keep(&head.predecessors);
    remaining[0].chance_predecessors = keep(&head.chance_predecessors);

    Ok(PreparedDecision {
        remaining,
        evidence: merged,
        base: evidence.clone(),
    })
}
