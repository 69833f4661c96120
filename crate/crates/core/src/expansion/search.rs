//! Searching for low-conductance sets: exhaustive enumeration on tiny graphs,
//! spectral sweeps at scale.

use super::{conductance_from_parts, CutReport};
use crate::error::{Error, Result};
use crate::graph::SmallWorldGraph;
use crate::vertex_set::VertexSet;
use crate::walk::spectral_gap;

/// Vertex limit for enumerating all `2^N` subsets.
pub const ALL_SUBSETS_CAP: usize = 25;
/// Vertex limit for enumerating connected subsets.
pub const CONNECTED_CAP: usize = 400;
/// Connected-set enumeration gives up after visiting this many sets.
pub const CONNECTED_BUDGET: u64 = 50_000_000;

/// Minimum of `Φ(S)` over all proper nonempty subsets, or over those inducing a
/// connected subgraph. Returns the value and a minimiser.
pub fn min_conductance_bruteforce(g: &SmallWorldGraph, connected_only: bool) -> Result<(f64, VertexSet)> {
    let nv = g.vertex_count();
    if connected_only {
        if nv > CONNECTED_CAP {
            return Err(Error::capacity(format!(
                "connected-set enumeration limited to N ≤ {CONNECTED_CAP}, got {nv}"
            )));
        }
        connected_minimum(g)
    } else {
        if nv > ALL_SUBSETS_CAP {
            return Err(Error::capacity(format!(
                "all-subsets enumeration limited to N ≤ {ALL_SUBSETS_CAP}, got {nv}"
            )));
        }
        gray_code_minimum(g)
    }
}

/// Walks all subsets in Gray-code order, updating cut and volume per flip.
fn gray_code_minimum(g: &SmallWorldGraph) -> Result<(f64, VertexSet)> {
    let nv = g.vertex_count();
    let adj: Vec<u32> = (0..nv)
        .map(|v| g.neighbours(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let degree: Vec<usize> = (0..nv).map(|v| g.degree(v)).collect();
    let two_e = 2 * g.edge_count();
    let full: u32 = if nv == 32 { u32::MAX } else { (1 << nv) - 1 };

    let (mut mask, mut cut, mut vol) = (0u32, 0usize, 0usize);
    let mut best = (f64::INFINITY, 0u32);
    for step in 1u64..(1u64 << nv) {
        let v = step.trailing_zeros() as usize;
        let inside = (adj[v] & mask).count_ones() as usize;
        if mask >> v & 1 == 0 {
            cut = cut + degree[v] - 2 * inside;
            vol += degree[v];
        } else {
            cut = cut + 2 * inside - degree[v];
            vol -= degree[v];
        }
        mask ^= 1 << v;
        if mask == full {
            continue;
        }
        let phi = conductance_from_parts(cut, vol, two_e - vol, two_e);
        if phi < best.0 {
            best = (phi, mask);
        }
    }
    Ok((best.0, VertexSet::from_mask(nv, best.1 as u64)))
}

struct ConnectedSearch<'g> {
    g: &'g SmallWorldGraph,
    two_e: usize,
    in_set: Vec<bool>,
    /// Number of set members adjacent to each vertex.
    touching: Vec<u32>,
    members: Vec<usize>,
    cut: usize,
    vol: usize,
    visited: u64,
    best: (f64, Vec<usize>),
}

impl ConnectedSearch<'_> {
    fn add(&mut self, w: usize) {
        self.in_set[w] = true;
        self.members.push(w);
        let inside = self.touching[w] as usize;
        self.cut = self.cut + self.g.degree(w) - 2 * inside;
        self.vol += self.g.degree(w);
        for &u in self.g.neighbours(w) {
            self.touching[u as usize] += 1;
        }
    }

    fn remove(&mut self, w: usize) {
        for &u in self.g.neighbours(w) {
            self.touching[u as usize] -= 1;
        }
        self.in_set[w] = false;
        self.members.pop();
        let inside = self.touching[w] as usize;
        self.cut = self.cut + 2 * inside - self.g.degree(w);
        self.vol -= self.g.degree(w);
    }

    /// Extension-set enumeration: every connected set whose minimum vertex is
    /// `anchor` is produced exactly once.
    fn extend(&mut self, extension: Vec<usize>, anchor: usize) -> Result<()> {
        self.visited += 1;
        if self.visited > CONNECTED_BUDGET {
            return Err(Error::capacity(format!(
                "more than {CONNECTED_BUDGET} connected sets; graph too large for exact search"
            )));
        }
        if self.members.len() < self.g.vertex_count() {
            let phi = conductance_from_parts(self.cut, self.vol, self.two_e - self.vol, self.two_e);
            if phi < self.best.0 {
                self.best = (phi, self.members.clone());
            }
        }
        let mut ext = extension;
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &u in self.g.neighbours(w) {
                let u = u as usize;
                if u > anchor && !self.in_set[u] && self.touching[u] == 0 {
                    next.push(u);
                }
            }
            self.add(w);
            self.extend(next, anchor)?;
            self.remove(w);
        }
        Ok(())
    }
}

fn connected_minimum(g: &SmallWorldGraph) -> Result<(f64, VertexSet)> {
    let nv = g.vertex_count();
    let mut search = ConnectedSearch {
        g,
        two_e: 2 * g.edge_count(),
        in_set: vec![false; nv],
        touching: vec![0; nv],
        members: Vec::new(),
        cut: 0,
        vol: 0,
        visited: 0,
        best: (f64::INFINITY, Vec::new()),
    };
    for anchor in 0..nv {
        search.add(anchor);
        let ext = g
            .neighbours(anchor)
            .iter()
            .map(|&u| u as usize)
            .filter(|&u| u > anchor)
            .collect();
        search.extend(ext, anchor)?;
        search.remove(anchor);
    }
    let (phi, members) = search.best;
    Ok((phi, VertexSet::from_indices(nv, members)))
}

/// Prefix cuts along the second eigenvector of the walk.
#[derive(Debug, Clone)]
pub struct SweepCut {
    /// Vertices in sweep order.
    pub order: Vec<usize>,
    /// `reports[k]` describes the prefix `order[..=k]`; there are `N − 1` of them.
    pub reports: Vec<CutReport>,
    /// Spectral gap of the lazy walk, a by-product of the ordering.
    pub gap: f64,
}

impl SweepCut {
    /// Index and report of the lowest-conductance prefix.
    pub fn best(&self) -> (usize, &CutReport) {
        self.reports
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.conductance.total_cmp(&b.1.conductance))
            .expect("sweep over at least two vertices")
    }

    pub fn prefix_set(&self, k: usize) -> VertexSet {
        VertexSet::from_indices(self.order.len(), self.order[..=k].iter().copied())
    }
}

/// Orders vertices by the walk's second eigenvector and reports every proper prefix.
pub fn sweep_cut(g: &SmallWorldGraph) -> Result<SweepCut> {
    let nv = g.vertex_count();
    let sg = spectral_gap(g)?;
    let f = sg.walk_eigenvector(g);
    let mut order: Vec<usize> = (0..nv).collect();
    order.sort_by(|&a, &b| f[a].total_cmp(&f[b]).then(a.cmp(&b)));

    let torus = g.torus();
    let two_e = 2 * g.edge_count();
    let mut in_set = vec![false; nv];
    let mut touching = vec![0u32; nv];
    let (mut cut, mut torus_cut, mut vol, mut vertex_boundary) = (0usize, 0usize, 0usize, 0usize);
    let mut reports = Vec::with_capacity(nv - 1);
    for (k, &v) in order[..nv - 1].iter().enumerate() {
        let inside = touching[v] as usize;
        cut = cut + g.degree(v) - 2 * inside;
        vol += g.degree(v);
        let torus_inside = torus.neighbours(v).iter().filter(|&&w| in_set[w]).count();
        torus_cut = torus_cut + 4 - 2 * torus_inside;
        if touching[v] > 0 {
            vertex_boundary -= 1;
        }
        in_set[v] = true;
        for &w in g.neighbours(v) {
            let w = w as usize;
            if !in_set[w] && touching[w] == 0 {
                vertex_boundary += 1;
            }
            touching[w] += 1;
        }
        reports.push(CutReport {
            set_size: k + 1,
            edge_boundary: cut,
            torus_edge_boundary: torus_cut,
            vertex_boundary,
            degree_sum: vol,
            conductance: conductance_from_parts(cut, vol, two_e - vol, two_e),
            alpha: (k + 1) as f64 / nv as f64,
        });
    }
    Ok(SweepCut { order, reports, gap: sg.gap })
}
