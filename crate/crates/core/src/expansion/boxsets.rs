//! Counting box-like sets that are connected in `G`.
//!
//! A union of `q` boxes is connected in `G` exactly when those `q` boxes induce
//! a connected subgraph of the box graph, where two boxes are adjacent if any
//! edge of `G` (torus or long-range) joins them.

use crate::error::{Error, Result};
use crate::graph::SmallWorldGraph;
use crate::torus::LPartition;

pub const MAX_BOXES: usize = 64;
pub const MAX_Q: usize = 4;

/// Box-graph adjacency as bitmasks (`Q ≤ 64`).
pub fn box_graph(g: &SmallWorldGraph, partition: &LPartition) -> Result<Vec<u64>> {
    let q = partition.len();
    if q > MAX_BOXES {
        return Err(Error::capacity(format!("box graph limited to {MAX_BOXES} boxes, got {q}")));
    }
    if partition.torus() != g.torus() {
        return Err(Error::domain("partition and graph live on different tori"));
    }
    let mut adj = vec![0u64; q];
    for (u, v) in g.edges() {
        let (a, b) = (partition.box_of(u), partition.box_of(v));
        if a != b {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
    }
    Ok(adj)
}

/// Number of `size`-vertex subsets inducing a connected subgraph of the
/// bitmask graph `adj`, each counted once via extension-set enumeration
/// anchored at its smallest vertex.
pub fn count_connected_subsets(adj: &[u64], size: usize) -> u64 {
    /// `closed` is the current set plus its neighbourhood; only vertices above the
    /// anchor (`above`) may join.
    fn grow(adj: &[u64], above: u64, closed: u64, extension: u64, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        let mut ext = extension;
        while ext != 0 {
            let w = 63 - ext.leading_zeros() as usize;
            ext &= !(1u64 << w);
            let exclusive = adj[w] & !closed & above;
            total += grow(adj, above, closed | adj[w], ext | exclusive, left - 1);
        }
        total
    }
    if size == 0 {
        return 0;
    }
    (0..adj.len())
        .map(|anchor| {
            let above = if anchor == 63 { 0 } else { !((1u64 << (anchor + 1)) - 1) };
            grow(adj, above, adj[anchor] | 1u64 << anchor, adj[anchor] & above, size - 1)
        })
        .sum()
}

/// `W_q`: box-like sets made of exactly `q` boxes that are connected in `G`.
pub fn enumerate_connected_boxsets(g: &SmallWorldGraph, partition: &LPartition, q: usize) -> Result<u64> {
    if q == 0 {
        return Err(Error::domain("q must be at least 1"));
    }
    if q > MAX_Q {
        return Err(Error::capacity(format!("W_q enumeration limited to q ≤ {MAX_Q}, got {q}")));
    }
    let adj = box_graph(g, partition)?;
    Ok(count_connected_subsets(&adj, q))
}

/// The expectation bound `n²(40ℓ²)^q`.
pub fn wq_bound(n: u32, ell: usize, q: usize) -> f64 {
    (n as f64).powi(2) * (40.0 * (ell * ell) as f64).powi(q as i32)
}
