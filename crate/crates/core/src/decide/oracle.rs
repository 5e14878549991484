//! Decision-tree rollback on the original diagram.
//!
//! Shares nothing with the compiled route beyond the model types: the
//! information sets are recomputed here, probabilities come from the full
//! joint over chance nodes, and values are the original table entries.

use std::collections::{BTreeMap, HashMap};

use super::{DecisionOutcome, DecisionRule, Policy, PolicyEntry};
use crate::error::{Error, Result};
use crate::model::{config_index, configurations, DiagramNode, Evidence, InfluenceDiagram};
use crate::scalar::{argmax_with_ties, min_max, Scalar};

struct Tree<'a, T> {
    diagram: &'a InfluenceDiagram<T>,
    /// Chance node names in declaration order.
    chance: Vec<&'a str>,
    chance_states: Vec<&'a [String]>,
    /// Remaining decisions in order, with their full information sets.
    stages: Vec<(&'a str, &'a [String], Vec<String>)>,
    base: Evidence,
    epsilon: T,
    /// Joint over chance nodes, per assignment of all decisions.
    joints: HashMap<Vec<usize>, Vec<(Vec<usize>, T)>>,
    decision_names: Vec<&'a str>,
}

impl<'a, T: Scalar> Tree<'a, T> {
    fn state(&self, node: &str, label: &str) -> Result<usize> {
        let labels = self
            .diagram
            .labels_of(node)
            .ok_or_else(|| Error::UnknownNode(node.to_string()))?;
        labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownState {
                node: node.to_string(),
                state: label.to_string(),
            })
    }

    /// Looks up a node's index within `evidence`-style assignment of a full
    /// chance configuration plus decision choices.
    fn lookup(&self, name: &str, chance: &[usize], decisions: &[usize]) -> usize {
        if let Some(i) = self.chance.iter().position(|c| *c == name) {
            chance[i]
        } else {
            let d = self
                .decision_names
                .iter()
                .position(|c| *c == name)
                .expect("parent is a chance or decision node");
            decisions[d]
        }
    }

    fn joint(&mut self, decisions: &[usize]) -> &[(Vec<usize>, T)] {
        if !self.joints.contains_key(decisions) {
            let cards: Vec<usize> = self.chance_states.iter().map(|s| s.len()).collect();
            let mut rows = Vec::new();
            for config in configurations(&cards) {
                let mut p = T::one();
                for node in self.diagram.chance_nodes() {
                    let i = self.chance.iter().position(|c| *c == node.name).unwrap();
                    let parent_cfg: Vec<usize> = node
                        .parents
                        .iter()
                        .map(|q| self.lookup(q, &config, decisions))
                        .collect();
                    let parent_cards: Vec<usize> = node
                        .parents
                        .iter()
                        .map(|q| self.diagram.labels_of(q).unwrap().len())
                        .collect();
                    p = p * node.cpt[config_index(&parent_cfg, &parent_cards)][config[i]].clone();
                }
                rows.push((config, p));
            }
            self.joints.insert(decisions.to_vec(), rows);
        }
        &self.joints[decisions]
    }

    /// Decision choices from `e`; decisions not yet chosen take their first
    /// alternative, which cannot affect anything observed before them.
    fn decision_vector(&self, e: &Evidence) -> Result<Vec<usize>> {
        self.decision_names
            .iter()
            .map(|d| e.get(d).map_or(Ok(0), |s| self.state(d, s)))
            .collect()
    }

    /// Chance configurations consistent with `e`, with their weights.
    fn consistent(&mut self, e: &Evidence) -> Result<Vec<(Vec<usize>, T)>> {
        let decisions = self.decision_vector(e)?;
        let mut fixed = Vec::new();
        for (i, name) in self.chance.iter().enumerate() {
            if let Some(s) = e.get(name) {
                fixed.push((i, self.state(name, s)?));
            }
        }
        Ok(self
            .joint(&decisions)
            .iter()
            .filter(|(c, p)| !p.is_zero() && fixed.iter().all(|&(i, s)| c[i] == s))
            .cloned()
            .collect())
    }

    /// Expected value of the value node under `e`, where every decision is
    /// chosen.
    fn expected_value(&mut self, e: &Evidence) -> Result<T> {
        let decisions = self.decision_vector(e)?;
        let rows = self.consistent(e)?;
        let value = self.diagram.value_node().expect("validated");
        let cards: Vec<usize> = value
            .parents
            .iter()
            .map(|q| self.diagram.labels_of(q).unwrap().len())
            .collect();
        let mut mass = T::zero();
        let mut total = T::zero();
        for (config, p) in rows {
            let pi: Vec<usize> = value
                .parents
                .iter()
                .map(|q| self.lookup(q, &config, &decisions))
                .collect();
            total = total + p.clone() * value.table[config_index(&pi, &cards)].clone();
            mass = mass + p;
        }
        if mass.is_zero() {
            return Err(Error::ImpossibleEvidence);
        }
        Ok(total / mass)
    }

    fn key(&self, stage: usize, e: &Evidence) -> Evidence {
        self.stages[stage]
            .2
            .iter()
            .filter(|p| !self.base.contains(p))
            .filter_map(|p| e.get(p).map(|s| (p.clone(), s.to_string())))
            .collect()
    }

    fn rollback(&mut self, stage: usize, e: &Evidence, rules: &mut [DecisionRule<T>]) -> Result<(T, usize, Vec<T>)> {
        let (decision, alternatives, _) = self.stages[stage].clone();
        let mut values = Vec::new();
        for alt in alternatives {
            let chosen = e.with(decision, alt.clone());
            let value = if stage + 1 == self.stages.len() {
                self.expected_value(&chosen)?
            } else {
                let open: Vec<String> = self.stages[stage + 1]
                    .2
                    .iter()
                    .filter(|p| !chosen.contains(p) && self.chance.contains(&p.as_str()))
                    .cloned()
                    .collect();
                let rows = self.consistent(&chosen)?;
                let mass = rows.iter().fold(T::zero(), |acc, (_, p)| acc + p.clone());
                if mass.is_zero() {
                    return Err(Error::ImpossibleEvidence);
                }
                let positions: Vec<usize> = open
                    .iter()
                    .map(|o| self.chance.iter().position(|c| c == o).unwrap())
                    .collect();
                let mut groups: BTreeMap<Vec<usize>, T> = BTreeMap::new();
                for (config, p) in rows {
                    let w: Vec<usize> = positions.iter().map(|&i| config[i]).collect();
                    let slot = groups.entry(w).or_insert_with(T::zero);
                    *slot = slot.clone() + p;
                }
                let mut sum = T::zero();
                for (w, p) in groups {
                    let mut next = chosen.clone();
                    for (k, &i) in positions.iter().enumerate() {
                        next.set(self.chance[i], self.chance_states[i][w[k]].clone());
                    }
                    let (child, _, _) = self.rollback(stage + 1, &next, rules)?;
                    sum = sum + child * p / mass.clone();
                }
                sum
            };
            values.push(value);
        }
        let best = argmax_with_ties(&values, &self.epsilon).expect("alternatives");
        rules[stage].entries.insert(
            self.key(stage, e),
            PolicyEntry {
                alternative: alternatives[best].clone(),
                expected_value: values[best].clone(),
            },
        );
        Ok((values[best].clone(), best, values))
    }
}

/// Solves the remaining decisions of `diagram` by expanding the full
/// decision tree under `evidence`.
///
/// Evidence follows the same conventions as the compiled solver: decisions
/// already made are evidence, and chance predecessors of the first
/// remaining decision that are not in evidence are treated as unobserved.
pub fn oracle_decision_tree<T: Scalar>(
    diagram: &InfluenceDiagram<T>,
    evidence: &Evidence,
) -> Result<(DecisionOutcome<T>, Policy<T>)> {
    let report = crate::model::validate_id(diagram);
    if !report.is_ok() {
        return Err(Error::Invalid(report));
    }
    let value = diagram.value_node().expect("validated");
    if evidence.contains(&value.name) {
        return Err(Error::usage("the value node cannot be evidence"));
    }

    let decisions: Vec<_> = diagram.decisions().collect();
    let mut seen: Vec<String> = Vec::new();
    let mut info: Vec<Vec<String>> = Vec::new();
    for d in &decisions {
        let mut set = seen.clone();
        for o in &d.observes {
            if !set.contains(o) {
                set.push(o.clone());
            }
        }
        info.push(set.clone());
        for extra in std::iter::once(&d.name).chain(set.iter()) {
            if !seen.contains(extra) {
                seen.push(extra.clone());
            }
        }
    }

    let first = decisions
        .iter()
        .position(|d| !evidence.contains(&d.name))
        .ok_or_else(|| Error::usage("every decision has already been made"))?;
    if decisions[first..].iter().any(|d| evidence.contains(&d.name)) {
        return Err(Error::usage("decisions must be made in order"));
    }

    let chance: Vec<&str> = diagram.chance_nodes().map(|c| c.name.as_str()).collect();
    let mut stages: Vec<(&str, &[String], Vec<String>)> = decisions[first..]
        .iter()
        .zip(&info[first..])
        .map(|(d, set)| (d.name.as_str(), d.alternatives.as_slice(), set.clone()))
        .collect();
    stages[0].2.retain(|p| evidence.contains(p));

    let epsilon = match min_max(&value.table) {
        Some((lo, hi)) => {
            let scale = (hi.clone() - lo.clone()) + if hi.abs() > lo.abs() { hi.abs() } else { lo.abs() };
            T::tie_epsilon() * scale
        }
        None => T::tie_epsilon(),
    };

    let mut tree = Tree {
        diagram,
        chance_states: diagram.chance_nodes().map(|c| c.states.as_slice()).collect(),
        chance,
        stages,
        base: evidence.clone(),
        epsilon,
        joints: HashMap::new(),
        decision_names: decisions.iter().map(|d| d.name.as_str()).collect(),
    };
    for (node, state) in evidence.iter() {
        if matches!(diagram.find(node), Some(DiagramNode::Value(_))) {
            continue;
        }
        tree.state(node, state)?;
    }
    if tree.consistent(evidence)?.is_empty() {
        return Err(Error::ImpossibleEvidence);
    }

    let mut rules: Vec<DecisionRule<T>> = tree
        .stages
        .iter()
        .map(|(d, _, set)| DecisionRule {
            decision: d.to_string(),
            predecessors: set.iter().filter(|p| !evidence.contains(p)).cloned().collect(),
            entries: BTreeMap::new(),
        })
        .collect();
    let (mev, best, values) = tree.rollback(0, evidence, &mut rules)?;
    let (decision, alternatives, _) = tree.stages[0].clone();
    Ok((
        DecisionOutcome {
            decision: decision.to_string(),
            mev,
            first_decision: alternatives[best].clone(),
            per_alternative: alternatives.iter().cloned().zip(values).collect(),
        },
        Policy { rules },
    ))
}
