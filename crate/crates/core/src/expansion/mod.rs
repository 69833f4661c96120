//! Edge and vertex boundaries, conductance and expansion of vertex sets.

mod boxsets;
mod distance;
mod search;

pub use boxsets::{box_graph, count_connected_subsets, enumerate_connected_boxsets, wq_bound};
pub use distance::{ball_set, diameter, double_sweep, Diameter, Sweep, EXACT_DIAMETER_CAP};
pub use search::{min_conductance_bruteforce, sweep_cut, SweepCut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SmallWorldGraph;
use crate::torus::Edge;
use crate::vertex_set::VertexSet;

/// Edges of `G` with exactly one endpoint in `s`, oriented `(inside, outside)`.
pub fn edge_boundary(g: &SmallWorldGraph, s: &VertexSet) -> Vec<Edge> {
    let mut out = Vec::new();
    for u in s.iter() {
        for &w in g.neighbours(u) {
            if !s.contains(w as usize) {
                out.push((u, w as usize));
            }
        }
    }
    out
}

pub fn edge_boundary_size(g: &SmallWorldGraph, s: &VertexSet) -> usize {
    s.iter()
        .map(|u| g.neighbours(u).iter().filter(|&&w| !s.contains(w as usize)).count())
        .sum()
}

/// Vertices outside `s` with at least one neighbour in `s`.
pub fn vertex_boundary(g: &SmallWorldGraph, s: &VertexSet) -> VertexSet {
    let mut out = VertexSet::new(g.vertex_count());
    for u in s.iter() {
        for &w in g.neighbours(u) {
            if !s.contains(w as usize) {
                out.insert(w as usize);
            }
        }
    }
    out
}

pub fn degree_sum(g: &SmallWorldGraph, s: &VertexSet) -> usize {
    s.iter().map(|v| g.degree(v)).sum()
}

/// `Φ` from its parts: `cut / (vol(S)·vol(V∖S) / 2|E|)`.
///
/// The product in the denominator is commutative in IEEE arithmetic, so the
/// value is exactly symmetric under complementation.
#[inline]
pub(crate) fn conductance_from_parts(cut: usize, vol_in: usize, vol_out: usize, two_e: usize) -> f64 {
    cut as f64 * two_e as f64 / (vol_in as f64 * vol_out as f64)
}

/// Normalised conductance of a proper nonempty subset.
pub fn conductance(g: &SmallWorldGraph, s: &VertexSet) -> Result<f64> {
    if s.is_empty() || s.len() == g.vertex_count() {
        return Err(Error::domain("conductance needs ∅ ⊂ S ⊂ V"));
    }
    let two_e = 2 * g.edge_count();
    let vol = degree_sum(g, s);
    Ok(conductance_from_parts(edge_boundary_size(g, s), vol, two_e - vol, two_e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutReport {
    pub set_size: usize,
    pub edge_boundary: usize,
    pub torus_edge_boundary: usize,
    pub vertex_boundary: usize,
    pub degree_sum: usize,
    pub conductance: f64,
    /// `|S| / N`.
    pub alpha: f64,
}

impl CutReport {
    pub fn new(g: &SmallWorldGraph, s: &VertexSet) -> Result<Self> {
        Ok(Self {
            set_size: s.len(),
            edge_boundary: edge_boundary_size(g, s),
            torus_edge_boundary: g.torus().edge_boundary_size(s),
            vertex_boundary: vertex_boundary(g, s).len(),
            degree_sum: degree_sum(g, s),
            conductance: conductance(g, s)?,
            alpha: s.len() as f64 / g.vertex_count() as f64,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionWitness {
    /// Size of the violating subset `S'`.
    pub subset_size: usize,
    /// Fewest edges any `S'` of that size sends out of `S`.
    pub min_outgoing: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionVerdict {
    pub epsilon: f64,
    pub c: f64,
    pub holds: bool,
    pub witness: Option<ExpansionWitness>,
}

/// Smallest subset size `m` with `m ≥ (1 − ε)|S|`, compared in `f64`.
pub fn min_retained_size(size: usize, epsilon: f64) -> usize {
    let threshold = (1.0 - epsilon) * size as f64;
    let mut m = threshold.ceil().max(0.0) as usize;
    while m > 0 && (m - 1) as f64 >= threshold {
        m -= 1;
    }
    while (m as f64) < threshold {
        m += 1;
    }
    m
}

/// Whether every `S' ⊆ S` with `|S'| ≥ (1−ε)|S|` sends at least `c|S'|` edges to `V∖S`.
///
/// Outgoing edge counts are additive over vertices, so for each size `m` the
/// worst `S'` takes the `m` vertices with fewest edges leaving `S`.
pub fn is_expanding(g: &SmallWorldGraph, s: &VertexSet, epsilon: f64, c: f64) -> Result<ExpansionVerdict> {
    if s.is_empty() {
        return Err(Error::Precondition("expansion check needs a nonempty set".into()));
    }
    if !(epsilon > 0.0) || !(c > 0.0) {
        return Err(Error::domain(format!("need ε > 0 and c > 0, got ε = {epsilon}, c = {c}")));
    }
    let mut out_degree: Vec<usize> = s
        .iter()
        .map(|u| g.neighbours(u).iter().filter(|&&w| !s.contains(w as usize)).count())
        .collect();
    out_degree.sort_unstable();
    let first = min_retained_size(s.len(), epsilon);
    let mut prefix = 0usize;
    let mut witness = None;
    for (i, &b) in out_degree.iter().enumerate() {
        prefix += b;
        let m = i + 1;
        if m >= first && (prefix as f64) < c * m as f64 {
            witness = Some(ExpansionWitness { subset_size: m, min_outgoing: prefix });
            break;
        }
    }
    Ok(ExpansionVerdict {
        epsilon,
        c,
        holds: witness.is_none(),
        witness,
    })
}
