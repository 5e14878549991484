use crate::error::Result;
use crate::model::{BeliefNetwork, Evidence};
use crate::scalar::Scalar;

/// Repeatedly removes leaf nodes that are neither targets nor evidence.
///
/// Queries over the targets given the evidence are unchanged.
pub fn prune_barren<T: Scalar>(
    network: &BeliefNetwork<T>,
    targets: &[&str],
    evidence: &Evidence,
) -> Result<BeliefNetwork<T>> {
    let structure = network.structure()?;
    let n = network.len();
    let mut keep_anyway = vec![false; n];
    for t in targets {
        keep_anyway[network.require(t)?] = true;
    }
    for (node, _) in evidence.iter() {
        keep_anyway[network.require(node)?] = true;
    }
    let mut alive = vec![true; n];
    let mut child_count = vec![0usize; n];
    for ps in &structure.parents {
        for &p in ps {
            child_count[p] += 1;
        }
    }
    loop {
        let barren: Vec<usize> = (0..n)
            .filter(|&v| alive[v] && !keep_anyway[v] && child_count[v] == 0)
            .collect();
        if barren.is_empty() {
            break;
        }
        for v in barren {
            alive[v] = false;
            for &p in &structure.parents[v] {
                child_count[p] -= 1;
            }
        }
    }
    let nodes = network
        .nodes()
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(node, _)| node.clone())
        .collect();
    Ok(BeliefNetwork::new(network.name(), nodes))
}
