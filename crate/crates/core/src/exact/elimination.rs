use super::factor::Factor;
use super::ordering::min_fill_order;
use crate::model::graph::ancestors_closure;
use crate::model::{BeliefNetwork, Structure};
use crate::scalar::Scalar;

fn cpt_factor<T: Scalar>(network: &BeliefNetwork<T>, structure: &Structure, v: usize) -> Factor<T> {
    let mut vars = structure.parents[v].clone();
    vars.push(v);
    let cards = vars.iter().map(|&u| structure.cards[u]).collect();
    let values = network.nodes()[v].cpt.iter().flatten().cloned().collect();
    Factor::new(vars, cards, values)
}

/// Unnormalized `P(targets, E)` by variable elimination.
pub(super) fn joint<T: Scalar>(
    network: &BeliefNetwork<T>,
    structure: &Structure,
    targets: &[usize],
    assignment: &[Option<usize>],
) -> Vec<T> {
    let observed = assignment
        .iter()
        .enumerate()
        .filter_map(|(i, a)| a.map(|_| i));
    // Nodes outside the ancestral set of targets and evidence are barren.
    let relevant = ancestors_closure(
        &structure.parents,
        targets.iter().copied().chain(observed),
    );
    let mut factors: Vec<Factor<T>> = (0..network.len())
        .filter(|&v| relevant[v])
        .map(|v| cpt_factor(network, structure, v).restrict(assignment))
        .collect();
    let hidden: Vec<usize> = (0..network.len())
        .filter(|&v| relevant[v] && assignment[v].is_none() && !targets.contains(&v))
        .collect();
    let scopes: Vec<Vec<usize>> = factors.iter().map(|f| f.vars().to_vec()).collect();
    for var in min_fill_order(&scopes, &hidden) {
        let (touching, rest): (Vec<_>, Vec<_>) = factors.into_iter().partition(|f| f.mentions(var));
        factors = rest;
        let merged = touching
            .iter()
            .fold(Factor::unit(), |acc, f| acc.product(f));
        factors.push(merged.sum_out(var));
    }
    let result = factors
        .iter()
        .fold(Factor::unit(), |acc, f| acc.product(f));
    result.permuted(targets).into_values()
}
