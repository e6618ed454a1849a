//! Fill-reducing symmetric orderings.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::la::SparseMatrix;

/// Minimum-degree ordering of the symmetric pattern of `A + Aᵀ`.
///
/// Plain elimination-graph variant: eliminating a node turns its neighbourhood
/// into a clique. Ties go to the lowest index, so the ordering is
/// deterministic. Returns `perm` with `perm[k]` = original index of pivot `k`.
pub fn minimum_degree(a: &SparseMatrix) -> Vec<usize> {
    assert!(a.is_square());
    let n = a.n_rows();
    let mut adj = a.symmetric_adjacency();
    let mut eliminated = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..n).map(|i| Reverse((adj[i].len(), i))).collect();
    let mut perm = Vec::with_capacity(n);
    let mut merged = Vec::new();

    while let Some(Reverse((deg, v))) = heap.pop() {
        if eliminated[v] || deg != adj[v].len() {
            continue;
        }
        eliminated[v] = true;
        perm.push(v);
        let nbrs = std::mem::take(&mut adj[v]);
        for &u in &nbrs {
            // adj[u] <- (adj[u] ∪ nbrs) \ {u, v}
            merged.clear();
            let (old, new) = (&adj[u], &nbrs);
            let (mut p, mut q) = (0, 0);
            while p < old.len() || q < new.len() {
                let x = old.get(p).copied().unwrap_or(usize::MAX);
                let y = new.get(q).copied().unwrap_or(usize::MAX);
                let next = if x < y {
                    p += 1;
                    x
                } else if y < x {
                    q += 1;
                    y
                } else {
                    p += 1;
                    q += 1;
                    x
                };
                if next != u && next != v {
                    merged.push(next);
                }
            }
            std::mem::swap(&mut adj[u], &mut merged);
            heap.push(Reverse((adj[u].len(), u)));
        }
    }
    debug_assert_eq!(perm.len(), n);
    perm
}

/// Inverse of a permutation.
pub fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    inv
}
