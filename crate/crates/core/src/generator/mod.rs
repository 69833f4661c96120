//! Sampling the small-world model: the torus plus independent long-range edges,
//! each pair at torus distance `ℓ ≥ 2` joined with probability `ℓ^{-r} / Z`.

mod io;

pub use io::{load_graph, save_graph};

use std::collections::HashSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SmallWorldGraph;
use crate::torus::Torus;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: u32,
    pub r: f64,
    pub seed: u64,
}

impl ModelParams {
    pub fn new(n: u32, r: f64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n must be positive"));
        }
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::domain(format!("r must be a finite nonnegative real, got {r}")));
        }
        Ok(Self { n, r, seed })
    }
}

/// The normaliser making the expected long-range degree of every vertex one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormaliserZ {
    pub value: f64,
    pub n: u32,
    pub r: f64,
}

/// Compensated (Neumaier) summation.
fn neumaier_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// `Z = Σ_{ℓ=2}^{2n} 4·min(ℓ, 2n+1−ℓ)·ℓ^{-r}`, in `O(n)`.
pub fn compute_z(n: u32, r: f64) -> Result<NormaliserZ> {
    let params = ModelParams::new(n, r, 0)?;
    let torus = Torus::new(params.n)?;
    let value = neumaier_sum(
        (2..=2 * n).map(|ell| torus.ring_size_unchecked(ell) as f64 * (ell as f64).powf(-r)),
    );
    Ok(NormaliserZ { value, n, r })
}

/// Probability `ℓ^{-r}/Z` that a given pair at torus distance `ℓ` is joined.
pub fn edge_probability(n: u32, r: f64, ell: u32) -> Result<f64> {
    if ell < 2 || ell > 2 * n {
        return Err(Error::domain(format!(
            "long-range distance {ell} outside [2, {}]",
            2 * n
        )));
    }
    let z = compute_z(n, r)?;
    Ok((ell as f64).powf(-r) / z.value)
}

/// Per-distance edge probabilities, indexed by `ℓ` (entries 0 and 1 are zero).
#[derive(Debug, Clone)]
pub struct DistanceLaw {
    pub z: f64,
    pub prob: Vec<f64>,
}

impl DistanceLaw {
    pub fn new(n: u32, r: f64) -> Result<Self> {
        let z = compute_z(n, r)?.value;
        let mut prob = vec![0.0; 2 * n as usize + 1];
        for (ell, p) in prob.iter_mut().enumerate().skip(2) {
            *p = (ell as f64).powf(-r) / z;
        }
        Ok(Self { z, prob })
    }
}

/// Number of unordered vertex pairs at torus distance `ell`: `N·|ring(ℓ)|/2`.
pub fn pair_count(torus: &Torus, ell: u32) -> u64 {
    torus.vertex_count() as u64 * torus.ring_size_unchecked(ell) as u64 / 2
}

/// Long-range edges at one distance class, drawn from the RNG substream `ell`.
///
/// The number of successes among `M_ℓ` independent Bernoulli trials is
/// `Binomial(M_ℓ, p_ℓ)` and, given that number, the successful pairs form a
/// uniform subset. A uniform pair at distance `ℓ` is a uniform vertex plus a
/// uniform ring offset.
fn sample_distance_class(torus: &Torus, seed: u64, ell: u32, p: f64) -> Result<Vec<(u32, u32)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(ell as u64);
    let pairs = pair_count(torus, ell);
    let k = Binomial::new(pairs, p.min(1.0))
        .map_err(|e| Error::domain(format!("binomial({pairs}, {p}): {e}")))?
        .sample(&mut rng) as usize;
    if k == 0 {
        return Ok(Vec::new());
    }
    let offsets = torus.ring_offsets(ell)?;
    let nv = torus.vertex_count();
    let endpoint = |u: usize, off: (i32, i32)| -> u32 {
        let c = torus.coord(u);
        torus.index_unchecked(torus.wrap(c.x as i64 + off.0 as i64, c.y as i64 + off.1 as i64)) as u32
    };

    let mut out: Vec<(u32, u32)>;
    if 2 * k as u64 > pairs {
        // Dense class: enumerate the pairs and pick a uniform k-subset.
        let mut all = Vec::with_capacity(pairs as usize);
        for u in 0..nv {
            for &off in &offsets {
                let w = endpoint(u, off);
                if (u as u32) < w {
                    all.push((u as u32, w));
                }
            }
        }
        debug_assert_eq!(all.len() as u64, pairs);
        out = index::sample(&mut rng, all.len(), k).into_iter().map(|i| all[i]).collect();
    } else {
        let mut seen = HashSet::with_capacity(2 * k);
        out = Vec::with_capacity(k);
        while out.len() < k {
            let u = rng.random_range(0..nv);
            let w = endpoint(u, offsets[rng.random_range(0..offsets.len())]);
            let e = if (u as u32) < w { (u as u32, w) } else { (w, u as u32) };
            if seen.insert(e) {
                out.push(e);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Samples `G_{n,r}` with one binomial draw per distance class.
///
/// Distance class `ℓ` uses ChaCha8 stream `ℓ` under the given seed, so the
/// result does not depend on how classes are scheduled across threads.
pub fn sample_graph(params: ModelParams) -> Result<SmallWorldGraph> {
    let params = ModelParams::new(params.n, params.r, params.seed)?;
    let torus = Torus::new(params.n)?;
    let law = DistanceLaw::new(params.n, params.r)?;
    let classes: Vec<Vec<(u32, u32)>> = (2..=2 * params.n)
        .into_par_iter()
        .map(|ell| sample_distance_class(&torus, params.seed, ell, law.prob[ell as usize]))
        .collect::<Result<_>>()?;
    let long_range = classes.into_iter().flatten().collect();
    SmallWorldGraph::from_long_range(params, law.z, long_range)
}

/// Reference sampler: one Bernoulli trial per unordered pair, `O(N²)`.
pub fn sample_graph_naive(params: ModelParams) -> Result<SmallWorldGraph> {
    let params = ModelParams::new(params.n, params.r, params.seed)?;
    let torus = Torus::new(params.n)?;
    let nv = torus.vertex_count();
    if nv > 20_000 {
        return Err(Error::capacity(format!("naive sampler limited to N ≤ 20000, got {nv}")));
    }
    let law = DistanceLaw::new(params.n, params.r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(0);
    let mut long_range = Vec::new();
    for u in 0..nv {
        for w in u + 1..nv {
            let d = torus.index_distance(u, w) as usize;
            if d >= 2 && rng.random::<f64>() < law.prob[d] {
                long_range.push((u as u32, w as u32));
            }
        }
    }
    SmallWorldGraph::from_long_range(params, law.z, long_range)
}
