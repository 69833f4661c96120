//! Immutable compressed-sparse-row storage for a sampled small-world graph.

use crate::error::{Error, Result};
use crate::generator::ModelParams;
use crate::torus::Torus;
use crate::vertex_set::VertexSet;

/// Torus edges plus long-range edges, stored as sorted CSR adjacency.
///
/// Long-range edges are kept separately as sorted `(u, v)` pairs with `u < v`;
/// torus edges are implicit in the geometry and never serialised.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallWorldGraph {
    params: ModelParams,
    torus: Torus,
    z: f64,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    long_range: Vec<(u32, u32)>,
}

impl SmallWorldGraph {
    /// Assembles a graph from its long-range edge list, validating every model constraint.
    pub fn from_long_range(params: ModelParams, z: f64, mut long_range: Vec<(u32, u32)>) -> Result<Self> {
        let torus = Torus::new(params.n)?;
        let nv = torus.vertex_count();
        for e in long_range.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        long_range.sort_unstable();
        for w in long_range.windows(2) {
            if w[0] == w[1] {
                return Err(Error::domain(format!("duplicate long-range edge {:?}", w[0])));
            }
        }
        for &(u, v) in &long_range {
            let (u, v) = (u as usize, v as usize);
            if v >= nv {
                return Err(Error::domain(format!("vertex {v} out of range {nv}")));
            }
            if torus.index_distance(u, v) < 2 {
                return Err(Error::domain(format!(
                    "long-range edge ({u}, {v}) joins vertices at torus distance < 2"
                )));
            }
        }
        Ok(Self::assemble(params, torus, z, long_range))
    }

    /// The bare torus: every vertex has degree 4.
    pub fn torus_only(params: ModelParams, z: f64) -> Result<Self> {
        Self::from_long_range(params, z, Vec::new())
    }

    fn assemble(params: ModelParams, torus: Torus, z: f64, long_range: Vec<(u32, u32)>) -> Self {
        let nv = torus.vertex_count();
        let mut degree = vec![4usize; nv];
        for &(u, v) in &long_range {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(nv + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill: Vec<usize> = offsets[..nv].to_vec();
        let mut targets = vec![0u32; offsets[nv]];
        let mut push = |a: usize, b: usize| {
            targets[fill[a]] = b as u32;
            fill[a] += 1;
        };
        for u in 0..nv {
            for w in torus.neighbours(u) {
                push(u, w);
            }
        }
        for &(u, v) in &long_range {
            push(u as usize, v as usize);
            push(v as usize, u as usize);
        }
        for u in 0..nv {
            targets[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        Self { params, torus, z, offsets, targets, long_range }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// `|E| = 2N + #long-range`.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn long_range_edges(&self) -> &[(u32, u32)] {
        &self.long_range
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Sorted, duplicate-free neighbour list.
    #[inline]
    pub fn neighbours(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbours(u).binary_search(&(v as u32)).is_ok()
    }

    /// Every edge once as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbours(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.vertex_count())
    }

    /// Breadth-first distances from `source`, `u32::MAX` where unreachable.
    pub fn bfs(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut queue = std::collections::VecDeque::with_capacity(self.vertex_count());
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u] + 1;
            for &w in self.neighbours(u) {
                let w = w as usize;
                if dist[w] == u32::MAX {
                    dist[w] = du;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}
