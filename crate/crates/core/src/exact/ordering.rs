use std::collections::{BTreeMap, BTreeSet};

/// Greedy min-fill elimination order.
///
/// The interaction graph connects variables that share a factor scope.
/// At each step the variable in `hidden` whose elimination adds the fewest
/// fill edges is taken; ties go to the lowest variable index.
pub fn min_fill_order(scopes: &[Vec<usize>], hidden: &[usize]) -> Vec<usize> {
    let mut adjacency: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for scope in scopes {
        for &v in scope {
            let entry = adjacency.entry(v).or_default();
            entry.extend(scope.iter().copied().filter(|&w| w != v));
        }
    }
    let mut remaining: BTreeSet<usize> = hidden.iter().copied().collect();
    let mut order = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let next = *remaining
            .iter()
            .min_by_key(|&&v| (fill_in(&adjacency, v), v))
            .expect("nonempty");
        remaining.remove(&next);
        order.push(next);
        let neighbours: Vec<usize> = adjacency
            .remove(&next)
            .unwrap_or_default()
            .into_iter()
            .collect();
        for &a in &neighbours {
            let entry = adjacency.entry(a).or_default();
            entry.remove(&next);
            entry.extend(neighbours.iter().copied().filter(|&b| b != a));
        }
    }
    order
}

fn fill_in(adjacency: &BTreeMap<usize, BTreeSet<usize>>, v: usize) -> usize {
    let Some(neighbours) = adjacency.get(&v) else {
        return 0;
    };
    let ns: Vec<usize> = neighbours.iter().copied().collect();
    let mut missing = 0;
    for (i, a) in ns.iter().enumerate() {
        for b in &ns[i + 1..] {
            if !adjacency.get(a).is_some_and(|s| s.contains(b)) {
                missing += 1;
            }
        }
    }
    missing
}
