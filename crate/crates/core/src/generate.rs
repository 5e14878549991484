//! Random networks, diagrams and evidence for property tests, plus a
//! parameterized decision chain.
//!
//! Probabilities are drawn as small integer weights and normalized in the
//! target scalar, so rational instantiations have rows that sum to one
//! exactly.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{BeliefNetwork, ChanceNode, DecisionNode, DiagramNode, Evidence, InfluenceDiagram, ValueNode};
use crate::scalar::Scalar;
use crate::transform::CompiledDecisionProblem;

/// Size limits for [`random_diagram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagramShape {
    /// Total node count, value node included.
    pub max_nodes: usize,
    pub max_decisions: usize,
    pub max_states: usize,
    pub max_parents: usize,
}

impl Default for DiagramShape {
    fn default() -> Self {
        Self {
            max_nodes: 9,
            max_decisions: 3,
            max_states: 3,
            max_parents: 3,
        }
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// A random distribution over `n` states; now and then one state gets zero
/// weight.
fn random_row<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<T> {
    let mut weights: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
    if rng.gen_bool(0.15) {
        weights[rng.gen_range(0..n)] = 0;
    }
    let total: usize = weights.iter().sum();
    weights
        .into_iter()
        .map(|w| T::from_count(w) / T::from_count(total))
        .collect()
}

fn pick_parents<R: Rng + ?Sized>(rng: &mut R, earlier: &[String], max: usize) -> Vec<String> {
    let k = rng.gen_range(0..=max.min(earlier.len()));
    let mut chosen: Vec<String> = earlier.choose_multiple(rng, k).cloned().collect();
    // keep declaration order for readable tables
    chosen.sort_by_key(|p| earlier.iter().position(|e| e == p));
    chosen
}

fn cpt<T: Scalar, R: Rng + ?Sized>(rng: &mut R, rows: usize, states: usize) -> Vec<Vec<T>> {
    (0..rows).map(|_| random_row(rng, states)).collect()
}

/// A random DAG of `nodes` binary chance nodes.
pub fn random_network<T: Scalar, R: Rng + ?Sized>(rng: &mut R, nodes: usize, max_parents: usize) -> BeliefNetwork<T> {
    let mut names: Vec<String> = Vec::new();
    let mut out = Vec::new();
    for i in 0..nodes {
        let name = format!("X{i}");
        let parents = pick_parents(rng, &names, max_parents);
        let rows = 1 << parents.len();
        out.push(ChanceNode {
            name: name.clone(),
            states: vec!["T".into(), "F".into()],
            parents,
            cpt: cpt(rng, rows, 2),
        });
        names.push(name);
    }
    BeliefNetwork::new("random", out)
}

/// A random valid influence diagram within `shape`.
///
/// Chance and decision nodes are laid out in one random sequence and every
/// arc points forward in it, so the no-forgetting closure stays acyclic.
pub fn random_diagram<T: Scalar, R: Rng + ?Sized>(rng: &mut R, shape: &DiagramShape) -> InfluenceDiagram<T> {
    let body = rng.gen_range(2..shape.max_nodes.max(3));
    let decisions = rng.gen_range(1..=shape.max_decisions.min(body));
    let mut kinds: Vec<bool> = (0..body).map(|i| i < decisions).collect();
    kinds.shuffle(rng);

    let mut earlier: Vec<String> = Vec::new();
    let mut cards: Vec<usize> = Vec::new();
    let mut nodes: Vec<DiagramNode<T>> = Vec::new();
    let (mut d, mut c) = (0, 0);
    for is_decision in kinds {
        let states = rng.gen_range(2..=shape.max_states);
        if is_decision {
            d += 1;
            let name = format!("D{d}");
            let observes = pick_parents(rng, &earlier, shape.max_parents);
            nodes.push(DiagramNode::Decision(DecisionNode {
                name: name.clone(),
                alternatives: labels("a", states),
                observes,
            }));
            earlier.push(name);
        } else {
            c += 1;
            let name = format!("C{c}");
            let parents = pick_parents(rng, &earlier, shape.max_parents);
            let rows: usize = parents
                .iter()
                .map(|p| cards[earlier.iter().position(|e| e == p).unwrap()])
                .product();
            nodes.push(DiagramNode::Chance(ChanceNode {
                name: name.clone(),
                states: labels("s", states),
                parents,
                cpt: cpt(rng, rows, states),
            }));
            earlier.push(name);
        }
        cards.push(states);
    }

    // the value node depends on at least one decision
    let mut parents = pick_parents(rng, &earlier, shape.max_parents.saturating_sub(1));
    let decision_names: Vec<&String> = earlier.iter().filter(|n| n.starts_with('D')).collect();
    let anchor = (*decision_names.choose(rng).expect("at least one decision")).clone();
    if !parents.contains(&anchor) {
        parents.push(anchor);
        parents.sort_by_key(|p| earlier.iter().position(|e| e == p));
    }
    let rows: usize = parents
        .iter()
        .map(|p| cards[earlier.iter().position(|e| e == p).unwrap()])
        .product();
    let table = (0..rows)
        .map(|_| T::from_f64_lossy(rng.gen_range(-1000..=1000) as f64 / 100.0))
        .collect();
    nodes.push(DiagramNode::Value(ValueNode {
        name: "V".into(),
        parents,
        table,
    }));
    InfluenceDiagram::new("random", nodes)
}

/// Forward sample of every node; all states drawn have positive probability.
fn forward_sample<T: Scalar, R: Rng + ?Sized>(rng: &mut R, network: &BeliefNetwork<T>, fixed: &Evidence) -> Evidence {
    let order = network.topological_order().expect("acyclic");
    let mut out = Evidence::new();
    for name in order {
        let node = network.node(&name).unwrap();
        if let Some(s) = fixed.get(&name) {
            out.set(name.clone(), s.to_string());
            continue;
        }
        let config: Vec<usize> = node
            .parents
            .iter()
            .map(|p| {
                let parent = network.node(p).unwrap();
                parent.state_index(out.get(p).unwrap()).unwrap()
            })
            .collect();
        let cards: Vec<usize> = node
            .parents
            .iter()
            .map(|p| network.node(p).unwrap().states.len())
            .collect();
        let row = &node.cpt[crate::model::config_index(&config, &cards)];
        let weights: Vec<f64> = row.iter().map(Scalar::to_f64_lossy).collect();
        let total: f64 = weights.iter().sum();
        let mut u = rng.gen::<f64>() * total;
        let mut state = weights.iter().rposition(|w| *w > 0.0).unwrap();
        for (i, w) in weights.iter().enumerate() {
            if *w > 0.0 && u < *w {
                state = i;
                break;
            }
            u -= w;
        }
        out.set(name.clone(), node.states[state].clone());
    }
    out
}

/// Random evidence with positive probability: a forward sample restricted
/// to a random subset of nodes.
pub fn random_evidence<T: Scalar, R: Rng + ?Sized>(rng: &mut R, network: &BeliefNetwork<T>, max_size: usize) -> Evidence {
    let sample = forward_sample(rng, network, &Evidence::new());
    let mut names: Vec<&str> = network.nodes().iter().map(|n| n.name.as_str()).collect();
    names.shuffle(rng);
    let k = rng.gen_range(0..=max_size.min(names.len()));
    names[..k]
        .iter()
        .map(|n| (n.to_string(), sample.get(n).unwrap().to_string()))
        .collect()
}

/// Random positive-probability evidence for a compiled problem: a random
/// prefix of decisions already made, plus observed chance nodes that do not
/// depend on any decision still pending. At least one decision remains.
pub fn random_decision_evidence<T: Scalar, R: Rng + ?Sized>(rng: &mut R, problem: &CompiledDecisionProblem<T>) -> Evidence {
    let network = &problem.network;
    let decisions: Vec<&str> = problem.decisions.entries.iter().map(|e| e.decision.as_str()).collect();
    let made = rng.gen_range(0..decisions.len());
    let sample = forward_sample(rng, network, &Evidence::new());

    let structure = network.structure().expect("acyclic");
    let pending: Vec<usize> = decisions[made..]
        .iter()
        .map(|d| network.index_of(d).unwrap())
        .collect();
    let downstream = crate::model::graph::descendants_closure(&structure.parents, pending);

    let mut evidence: Evidence = decisions[..made]
        .iter()
        .map(|d| (d.to_string(), sample.get(d).unwrap().to_string()))
        .collect();
    for (i, node) in network.nodes().iter().enumerate() {
        if downstream[i] || node.name == problem.value_node || decisions.contains(&node.name.as_str()) {
            continue;
        }
        if rng.gen_bool(0.4) {
            evidence.set(node.name.clone(), sample.get(&node.name).unwrap().to_string());
        }
    }
    evidence
}

/// A chain of `k` binary decisions.
///
/// `X0` is a root; `D_i` observes `X_{i-1}`; `X_i` depends on `D_i` and
/// `X_{i-1}`; the value depends on `D_k` and `X_{k-1}`.
pub fn decision_chain<T: Scalar>(k: usize) -> InfluenceDiagram<T> {
    assert!(k >= 1, "a chain needs at least one decision");
    let p = |a: u32, b: u32| vec![T::from_count(a as usize) / T::from_count(10), T::from_count(b as usize) / T::from_count(10)];
    let mut nodes = vec![DiagramNode::Chance(ChanceNode {
        name: "X0".into(),
        states: vec!["T".into(), "F".into()],
        parents: vec![],
        cpt: vec![p(3, 7)],
    })];
    for i in 1..=k {
        nodes.push(DiagramNode::Decision(DecisionNode {
            name: format!("D{i}"),
            alternatives: vec!["go".into(), "stay".into()],
            observes: vec![format!("X{}", i - 1)],
        }));
        if i < k {
            nodes.push(DiagramNode::Chance(ChanceNode {
                name: format!("X{i}"),
                states: vec!["T".into(), "F".into()],
                parents: vec![format!("D{i}"), format!("X{}", i - 1)],
                cpt: vec![p(8, 2), p(4, 6), p(3, 7), p(1, 9)],
            }));
        }
    }
    nodes.push(DiagramNode::Value(ValueNode {
        name: "V".into(),
        parents: vec![format!("D{k}"), format!("X{}", k - 1)],
        table: [6, -2, 1, 3].iter().map(|&v: &i32| T::from_f64_lossy(v as f64)).collect(),
    }));
    InfluenceDiagram::new(format!("chain{k}"), nodes)
}
