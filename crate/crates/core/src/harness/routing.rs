//! Greedy geographic routing over torus and long-range edges.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SmallWorldGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutingResult {
    pub source: usize,
    pub target: usize,
    pub hops: usize,
    pub delivered: bool,
}

/// Moves to the neighbour closest to `target` in torus distance, ties going to
/// the smallest index, until `target` is reached or `hop_cap` hops are spent.
pub fn greedy_route(g: &SmallWorldGraph, source: usize, target: usize, hop_cap: usize) -> Result<RoutingResult> {
    let nv = g.vertex_count();
    if source >= nv || target >= nv {
        return Err(Error::domain(format!("route endpoints ({source}, {target}) out of range {nv}")));
    }
    if hop_cap == 0 {
        return Err(Error::domain("hop cap must be at least 1"));
    }
    let torus = g.torus();
    let dest = torus.coord(target);
    let mut at = source;
    let mut hops = 0;
    while at != target && hops < hop_cap {
        // neighbour lists are sorted, so the first strict minimum wins ties
        let mut best = (u32::MAX, usize::MAX);
        for &w in g.neighbours(at) {
            let d = torus.distance_unchecked(torus.coord(w as usize), dest);
            if d < best.0 {
                best = (d, w as usize);
            }
        }
        at = best.1;
        hops += 1;
    }
    Ok(RoutingResult {
        source,
        target,
        hops,
        delivered: at == target,
    })
}

/// Aggregate of many greedy routes between uniform random pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutingSummary {
    pub pairs: usize,
    pub delivered: usize,
    pub hops_median: f64,
    pub hops_mean: f64,
    pub hops_max: usize,
    /// Mean torus distance between the pairs.
    pub distance_mean: f64,
}

pub fn route_random_pairs(g: &SmallWorldGraph, pairs: usize, hop_cap: usize, seed: u64) -> Result<RoutingSummary> {
    if pairs == 0 {
        return Err(Error::domain("need at least one routing pair"));
    }
    let nv = g.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hops = Vec::with_capacity(pairs);
    let mut delivered = 0;
    let mut distance = 0u64;
    for _ in 0..pairs {
        let (s, t) = (rng.random_range(0..nv), rng.random_range(0..nv));
        let res = greedy_route(g, s, t, hop_cap)?;
        delivered += res.delivered as usize;
        distance += g.torus().index_distance(s, t) as u64;
        hops.push(res.hops as f64);
    }
    let hops_max = hops.iter().fold(0.0f64, |a, &b| a.max(b)) as usize;
    let hops_mean = hops.iter().sum::<f64>() / pairs as f64;
    Ok(RoutingSummary {
        pairs,
        delivered,
        hops_median: super::median(&mut hops),
        hops_mean,
        hops_max,
        distance_mean: distance as f64 / pairs as f64,
    })
}
