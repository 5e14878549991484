use crate::model::{configurations, BeliefNetwork, Structure};
use crate::scalar::Scalar;

/// Unnormalized `P(targets, E)` by summing every completion of the evidence.
pub(super) fn joint<T: Scalar>(
    network: &BeliefNetwork<T>,
    structure: &Structure,
    targets: &[usize],
    assignment: &[Option<usize>],
) -> Vec<T> {
    let nodes = network.nodes();
    let free: Vec<usize> = (0..nodes.len()).filter(|&i| assignment[i].is_none()).collect();
    let free_cards: Vec<usize> = free.iter().map(|&i| structure.cards[i]).collect();
    let target_size: usize = targets.iter().map(|&t| structure.cards[t]).product();
    let mut out = vec![T::zero(); target_size];
    let mut full: Vec<usize> = assignment.iter().map(|a| a.unwrap_or(0)).collect();
    for config in configurations(&free_cards) {
        for (k, &v) in free.iter().enumerate() {
            full[v] = config[k];
        }
        let mut p = T::one();
        for (v, node) in nodes.iter().enumerate() {
            let row = structure.parents[v]
                .iter()
                .fold(0, |acc, &q| acc * structure.cards[q] + full[q]);
            p = p * node.cpt[row][full[v]].clone();
            if p.is_zero() {
                break;
            }
        }
        let at = targets
            .iter()
            .fold(0, |acc, &t| acc * structure.cards[t] + full[t]);
        out[at] = out[at].clone() + p;
    }
    out
}
