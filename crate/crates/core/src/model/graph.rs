use std::collections::BTreeSet;

/// Kahn's algorithm; among ready nodes the lowest index goes first.
///
/// On a cycle, returns the lowest-indexed node that could not be placed.
pub(crate) fn kahn_order(parents: &[Vec<usize>]) -> Result<Vec<usize>, usize> {
    let n = parents.len();
    let mut children = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for (child, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(child);
            indegree[child] += 1;
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(next) = ready.pop_first() {
        order.push(next);
        for &c in &children[next] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        let placed: BTreeSet<usize> = order.into_iter().collect();
        Err((0..n).find(|i| !placed.contains(i)).expect("unplaced node"))
    }
}

/// `marks[v]` is true for `v` in `seeds` and every ancestor of a seed.
pub(crate) fn ancestors_closure(parents: &[Vec<usize>], seeds: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut marks = vec![false; parents.len()];
    let mut stack: Vec<usize> = seeds.into_iter().collect();
    while let Some(v) = stack.pop() {
        if marks[v] {
            continue;
        }
        marks[v] = true;
        stack.extend(parents[v].iter().copied().filter(|&p| !marks[p]));
    }
    marks
}

/// `marks[v]` is true for `v` in `seeds` and every descendant of a seed.
pub(crate) fn descendants_closure(parents: &[Vec<usize>], seeds: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let n = parents.len();
    let mut children = vec![Vec::new(); n];
    for (child, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(child);
        }
    }
    let mut marks = vec![false; n];
    let mut stack: Vec<usize> = seeds.into_iter().collect();
    while let Some(v) = stack.pop() {
        if marks[v] {
            continue;
        }
        marks[v] = true;
        stack.extend(children[v].iter().copied().filter(|&c| !marks[c]));
    }
    marks
}
