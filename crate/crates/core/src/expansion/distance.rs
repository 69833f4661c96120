//! Graph distances: double sweeps, exact diameter, torus balls.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SmallWorldGraph;
use crate::torus::{Torus, TorusCoord};
use crate::vertex_set::VertexSet;

/// Exact diameter is refused above this many vertices.
pub const EXACT_DIAMETER_CAP: usize = 100_000;

/// Eccentricity of `v` and the smallest-index vertex attaining it.
fn eccentricity(dist: &[u32]) -> (u32, usize) {
    let mut best = (0u32, 0usize);
    for (w, &d) in dist.iter().enumerate() {
        debug_assert!(d != u32::MAX, "graph is disconnected");
        if d > best.0 {
            best = (d, w);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sweep {
    pub from: usize,
    pub to: usize,
    pub distance: u32,
}

/// BFS from `start` to a farthest vertex `a`, then from `a` to a farthest `b`.
/// `d(a, b)` is a lower bound on the diameter.
pub fn double_sweep(g: &SmallWorldGraph, start: usize) -> Sweep {
    let (_, a) = eccentricity(&g.bfs(start));
    let (d, b) = eccentricity(&g.bfs(a));
    Sweep { from: a, to: b, distance: d }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diameter {
    pub value: u32,
    /// `false` when `value` is only the double-sweep lower bound.
    pub exact: bool,
    /// A pair of vertices at distance `value`.
    pub endpoints: (usize, usize),
    pub bfs_runs: usize,
}

/// Sources per bit-parallel BFS batch.
const BATCH: usize = 64;

/// BFS from up to 64 sources at once, one bit per source. Returns each
/// source's eccentricity and `dist[i * N + v]`.
fn batch_bfs(g: &SmallWorldGraph, sources: &[usize]) -> (Vec<u32>, Vec<u32>) {
    let nv = g.vertex_count();
    let k = sources.len();
    debug_assert!(k <= BATCH);
    let mut dist = vec![u32::MAX; k * nv];
    let mut ecc = vec![0u32; k];
    let mut seen = vec![0u64; nv];
    let mut frontier = vec![0u64; nv];
    let mut next = vec![0u64; nv];
    for (i, &s) in sources.iter().enumerate() {
        seen[s] |= 1 << i;
        frontier[s] |= 1 << i;
        dist[i * nv + s] = 0;
    }
    let mut level = 0;
    loop {
        level += 1;
        let mut any = false;
        for v in 0..nv {
            let reach = g.neighbours(v).iter().fold(0u64, |acc, &w| acc | frontier[w as usize]);
            let fresh = reach & !seen[v];
            next[v] = fresh;
            if fresh != 0 {
                any = true;
                seen[v] |= fresh;
                let mut bits = fresh;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    dist[i * nv + v] = level;
                    ecc[i] = level;
                }
            }
        }
        if !any {
            break;
        }
        std::mem::swap(&mut frontier, &mut next);
    }
    (ecc, dist)
}

/// Largest graph distance, exact or as a double-sweep lower bound.
///
/// The exact mode keeps lower and upper eccentricity bounds for every vertex,
/// refined by each BFS through the triangle inequality, and stops once no
/// vertex can still exceed the best eccentricity found. After a double sweep,
/// sources are taken 64 at a time, half with the largest upper bounds and half
/// with the smallest lower bounds.
pub fn diameter(g: &SmallWorldGraph, exact: bool) -> Result<Diameter> {
    let nv = g.vertex_count();
    let sweep = double_sweep(g, 0);
    let mut best = Diameter {
        value: sweep.distance,
        exact,
        endpoints: (sweep.from, sweep.to),
        bfs_runs: 2,
    };
    if !exact {
        return Ok(best);
    }
    if nv > EXACT_DIAMETER_CAP {
        return Err(Error::capacity(format!(
            "exact diameter limited to N ≤ {EXACT_DIAMETER_CAP}, got {nv}"
        )));
    }
    let mut lower = vec![0u32; nv];
    let mut upper = vec![u32::MAX; nv];
    let mut candidates: Vec<usize> = (0..nv).collect();
    let mut sources = vec![sweep.from, sweep.to];
    while !candidates.is_empty() {
        let (ecc, dist) = batch_bfs(g, &sources);
        best.bfs_runs += sources.len();
        for (i, &s) in sources.iter().enumerate() {
            if ecc[i] > best.value {
                let far = (0..nv).find(|&w| dist[i * nv + w] == ecc[i]).expect("eccentricity is attained");
                best.value = ecc[i];
                best.endpoints = (s, far);
            }
            lower[s] = ecc[i];
            upper[s] = ecc[i];
        }
        candidates.retain(|&w| {
            for (i, &e) in ecc.iter().enumerate() {
                let d = dist[i * nv + w];
                debug_assert!(d != u32::MAX, "graph is disconnected");
                lower[w] = lower[w].max(d.max(e - d));
                upper[w] = upper[w].min(e + d);
            }
            upper[w] > best.value
        });
        if candidates.len() <= BATCH {
            sources = candidates.clone();
        } else {
            candidates.sort_unstable_by_key(|&w| (std::cmp::Reverse(upper[w]), w));
            sources = candidates[..BATCH / 2].to_vec();
            let mut by_lower: Vec<usize> = candidates[BATCH / 2..].to_vec();
            by_lower.select_nth_unstable_by_key(BATCH / 2 - 1, |&w| (lower[w], w));
            sources.extend_from_slice(&by_lower[..BATCH / 2]);
        }
    }
    Ok(best)
}

/// Vertices within torus distance `radius` of the origin.
pub fn ball_set(torus: &Torus, radius: u32) -> Result<VertexSet> {
    if radius == 0 || radius > torus.n() {
        return Err(Error::domain(format!(
            "ball radius {radius} outside [1, n = {}]",
            torus.n()
        )));
    }
    let origin = TorusCoord::new(0, 0);
    Ok(VertexSet::from_indices(
        torus.vertex_count(),
        (0..torus.vertex_count()).filter(|&v| torus.distance_unchecked(origin, torus.coord(v)) <= radius),
    ))
}
