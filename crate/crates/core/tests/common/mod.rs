//! Reference computations written independently of the library's engines.
#![allow(dead_code)]

use std::collections::HashMap;

use decnet::{BeliefNetwork, Evidence};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ev(pairs: &[(&str, &str)]) -> Evidence {
    Evidence::from_pairs(pairs.iter().copied()).unwrap()
}

/// Probability of one full assignment (node name -> state index).
fn joint_of(net: &BeliefNetwork<f64>, assignment: &HashMap<&str, usize>) -> f64 {
    let mut p = 1.0;
    for node in net.nodes() {
        // row index, last parent fastest
        let mut row = 0;
        for parent in &node.parents {
            let card = net.node(parent).unwrap().states.len();
            row = row * card + assignment[parent.as_str()];
        }
        p *= node.cpt[row][assignment[node.name.as_str()]];
    }
    p
}

/// Visits every full assignment with its probability.
pub fn for_each_world(net: &BeliefNetwork<f64>, mut visit: impl FnMut(&HashMap<&str, usize>, f64)) {
    let names: Vec<&str> = net.nodes().iter().map(|n| n.name.as_str()).collect();
    let cards: Vec<usize> = net.nodes().iter().map(|n| n.states.len()).collect();
    let mut digits = vec![0usize; names.len()];
    loop {
        let assignment: HashMap<&str, usize> = names.iter().copied().zip(digits.iter().copied()).collect();
        visit(&assignment, joint_of(net, &assignment));
        let mut k = digits.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < cards[k] {
                break;
            }
            digits[k] = 0;
        }
    }
}

fn agrees(net: &BeliefNetwork<f64>, assignment: &HashMap<&str, usize>, evidence: &Evidence) -> bool {
    evidence.iter().all(|(n, s)| {
        let node = net.node(n).unwrap();
        node.states[assignment[n]] == s
    })
}

/// P(evidence) by summing every world.
pub fn brute_evidence_probability(net: &BeliefNetwork<f64>, evidence: &Evidence) -> f64 {
    let mut total = 0.0;
    for_each_world(net, |a, p| {
        if agrees(net, a, evidence) {
            total += p;
        }
    });
    total
}

/// Posterior of `target` by summing every world; `None` when P(E) = 0.
pub fn brute_posterior(net: &BeliefNetwork<f64>, target: &str, evidence: &Evidence) -> Option<Vec<f64>> {
    let card = net.node(target).unwrap().states.len();
    let mut mass = vec![0.0; card];
    for_each_world(net, |a, p| {
        if agrees(net, a, evidence) {
            mass[a[target]] += p;
        }
    });
    let total: f64 = mass.iter().sum();
    if total == 0.0 {
        return None;
    }
    Some(mass.into_iter().map(|m| m / total).collect())
}

/// A random binary network whose probabilities are whole percentages, so
/// every number survives serialization unchanged.
pub fn decimal_network(seed: u64, nodes: usize) -> BeliefNetwork<f64> {
    use rand::Rng;
    let mut r = rng(seed);
    let shape = decnet::generate::random_network::<f64, _>(&mut r, nodes, 3);
    let nodes = shape
        .nodes()
        .iter()
        .map(|n| {
            let mut node = n.clone();
            for row in node.cpt.iter_mut() {
                let k: u32 = r.gen_range(0..=100);
                *row = vec![k as f64 / 100.0, (100 - k) as f64 / 100.0];
            }
            node
        })
        .collect();
    BeliefNetwork::new("decimal", nodes)
}
