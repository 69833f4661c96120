//! Set generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use smallworld::{LPartition, SmallWorldGraph, VertexSet};

/// A connected set of `size` vertices grown from `start` by repeatedly adding
/// a uniformly chosen vertex of the current vertex boundary.
pub fn random_connected_set<R: Rng>(g: &SmallWorldGraph, start: usize, size: usize, rng: &mut R) -> VertexSet {
    let nv = g.vertex_count();
    let mut s = VertexSet::new(nv);
    let mut frontier = vec![start];
    let mut queued = vec![false; nv];
    queued[start] = true;
    while s.len() < size && !frontier.is_empty() {
        let i = rng.random_range(0..frontier.len());
        let v = frontier.swap_remove(i);
        s.insert(v);
        for &w in g.neighbours(v) {
            let w = w as usize;
            if !queued[w] {
                queued[w] = true;
                frontier.push(w);
            }
        }
    }
    s
}

/// A uniformly random subset of exactly `size` vertices.
pub fn random_set<R: Rng>(nv: usize, size: usize, rng: &mut R) -> VertexSet {
    let mut all: Vec<usize> = (0..nv).collect();
    all.shuffle(rng);
    VertexSet::from_indices(nv, all[..size].iter().copied())
}

/// A `w × h` block of boxes (indices into the box grid) starting at box `(bi, bj)`.
pub fn box_block(p: &LPartition, bi: usize, bj: usize, w: usize, h: usize) -> VertexSet {
    let per_axis = (p.len() as f64).sqrt().round() as usize;
    let mut s = VertexSet::new(p.torus().vertex_count());
    for a in 0..w {
        for b in 0..h {
            let idx = ((bi + a) % per_axis) * per_axis + (bj + b) % per_axis;
            s.union_with(&p.box_set(idx));
        }
    }
    s
}

/// Number of edges from `v` to vertices outside `s`.
pub fn outgoing(g: &SmallWorldGraph, s: &VertexSet, v: usize) -> usize {
    g.neighbours(v).iter().filter(|&&w| !s.contains(w as usize)).count()
}

/// `(ε, c)`-expansion by enumerating every subset of `s`.
pub fn brute_is_expanding(g: &SmallWorldGraph, s: &VertexSet, eps: f64, c: f64) -> bool {
    let members: Vec<usize> = s.iter().collect();
    let k = members.len();
    let out: Vec<usize> = members.iter().map(|&v| outgoing(g, s, v)).collect();
    (1u32..1 << k).all(|mask| {
        let size = mask.count_ones() as f64;
        if size < (1.0 - eps) * k as f64 {
            return true;
        }
        let edges: usize = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| out[i]).sum();
        edges as f64 >= c * size
    })
}

pub fn dense_kernel(g: &SmallWorldGraph) -> DMatrix<f64> {
    let nv = g.vertex_count();
    DMatrix::from_fn(nv, nv, |u, v| {
        let hold = if u == v { 0.5 } else { 0.0 };
        let mv = if g.has_edge(u, v) { 0.5 / g.degree(u) as f64 } else { 0.0 };
        hold + mv
    })
}

/// Exact mixing time by powering the dense kernel one step at a time.
pub fn dense_mixing_time(g: &SmallWorldGraph, eps: f64) -> u64 {
    let nv = g.vertex_count();
    let p = dense_kernel(g);
    let two_e = (2 * g.edge_count()) as f64;
    let pi: Vec<f64> = (0..nv).map(|v| g.degree(v) as f64 / two_e).collect();
    let worst = |m: &DMatrix<f64>| {
        (0..nv)
            .map(|u| 0.5 * (0..nv).map(|v| (m[(u, v)] - pi[v]).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let mut m = DMatrix::<f64>::identity(nv, nv);
    let mut t = 0;
    while worst(&m) > eps {
        m = &m * &p;
        t += 1;
    }
    t
}
