#![allow(dead_code)]

use sta_core::discrete::TspInstance;

/// Shortest closed tour by exhaustive enumeration with city 0 fixed first.
pub fn brute_force_optimum(inst: &TspInstance) -> f64 {
    let n = inst.len();
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut rest, 0, &mut |order| {
        let mut len = inst.distance(0, order[0]) + inst.distance(order[n - 2], 0);
        for w in order.windows(2) {
            len += inst.distance(w[0], w[1]);
        }
        best = best.min(len);
    });
    best
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Greedy nearest-neighbor tour length starting from city 0.
pub fn nearest_neighbor_length(inst: &TspInstance) -> f64 {
    let n = inst.len();
    let mut visited = vec![false; n];
    visited[0] = true;
    let (mut at, mut len) = (0, 0.0);
    for _ in 1..n {
        let next = (0..n)
            .filter(|&j| !visited[j])
            .min_by(|&a, &b| inst.distance(at, a).total_cmp(&inst.distance(at, b)))
            .unwrap();
        len += inst.distance(at, next);
        visited[next] = true;
        at = next;
    }
    len + inst.distance(at, 0)
}
