//! The lazy random walk: hold with probability ½, otherwise step to a uniform neighbour.

mod spectral;

pub use spectral::{spectral_gap, SpectralGap};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::double_sweep;
use crate::graph::SmallWorldGraph;

/// Below this size a kernel application is not worth splitting across threads.
const PAR_THRESHOLD: usize = 1 << 14;
/// Renormalise the evolving distribution once every this many steps.
const RENORMALISE_EVERY: u64 = 64;
/// Hard cap on walk length during mixing-time search.
const MAX_MIX_STEPS: u64 = 1 << 26;

/// A distribution over canonical vertex indices.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::domain("probability entries must be nonnegative"));
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self(entries))
    }

    pub fn point_mass(len: usize, v: usize) -> Self {
        let mut e = vec![0.0; len];
        e[v] = 1.0;
        Self(e)
    }

    pub fn uniform(len: usize) -> Self {
        Self(vec![1.0 / len as f64; len])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.0.iter().sum()
    }

    fn renormalise(&mut self) {
        let total = self.mass();
        self.0.iter_mut().for_each(|p| *p /= total);
    }
}

/// `π_v = d_v / (2|E|)`.
pub fn stationary(g: &SmallWorldGraph) -> ProbabilityVector {
    let two_e = 2.0 * g.edge_count() as f64;
    ProbabilityVector((0..g.vertex_count()).map(|v| g.degree(v) as f64 / two_e).collect())
}

/// Half the L1 distance.
pub fn tv_distance(mu: &ProbabilityVector, nu: &ProbabilityVector) -> Result<f64> {
    tv_slices(mu.as_slice(), nu.as_slice())
}

fn tv_slices(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::domain(format!("length mismatch {} vs {}", a.len(), b.len())));
    }
    Ok(0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>())
}

/// Applies the lazy kernel to distributions, reusing scratch buffers.
pub struct LazyKernel<'g> {
    g: &'g SmallWorldGraph,
    half_inv_degree: Vec<f64>,
    scratch: Vec<f64>,
}

impl<'g> LazyKernel<'g> {
    pub fn new(g: &'g SmallWorldGraph) -> Self {
        let half_inv_degree = (0..g.vertex_count()).map(|v| 0.5 / g.degree(v) as f64).collect();
        Self {
            g,
            half_inv_degree,
            scratch: vec![0.0; g.vertex_count()],
        }
    }

    /// `ν_w = μ_w/2 + Σ_{v ~ w} μ_v / (2 d_v)`, written into `out`.
    pub fn apply(&mut self, mu: &[f64], out: &mut [f64]) {
        let g = self.g;
        for ((s, &m), &h) in self.scratch.iter_mut().zip(mu).zip(&self.half_inv_degree) {
            *s = m * h;
        }
        let scratch = &self.scratch;
        let cell = |(w, o): (usize, &mut f64)| {
            let inflow: f64 = g.neighbours(w).iter().map(|&v| scratch[v as usize]).sum();
            *o = 0.5 * mu[w] + inflow;
        };
        if out.len() >= PAR_THRESHOLD {
            out.par_iter_mut().enumerate().for_each(cell);
        } else {
            out.iter_mut().enumerate().for_each(cell);
        }
    }

    /// Advances `mu` by `steps` applications, renormalising periodically.
    fn advance(&mut self, mu: &mut ProbabilityVector, steps: u64, buf: &mut Vec<f64>) {
        buf.resize(mu.len(), 0.0);
        for i in 0..steps {
            self.apply(&mu.0, buf);
            std::mem::swap(&mut mu.0, buf);
            if (i + 1) % RENORMALISE_EVERY == 0 {
                mu.renormalise();
            }
        }
    }
}

/// One step of the lazy walk.
pub fn step_distribution(g: &SmallWorldGraph, mu: &ProbabilityVector) -> Result<ProbabilityVector> {
    if mu.len() != g.vertex_count() {
        return Err(Error::domain("distribution length differs from vertex count"));
    }
    let mut out = vec![0.0; mu.len()];
    LazyKernel::new(g).apply(mu.as_slice(), &mut out);
    Ok(ProbabilityVector(out))
}

/// `‖P^t(v,·) − π‖_TV`.
pub fn distance_to_stationarity(g: &SmallWorldGraph, v: usize, t: u64) -> Result<f64> {
    if v >= g.vertex_count() {
        return Err(Error::domain(format!("vertex {v} out of range")));
    }
    let pi = stationary(g);
    let mut mu = ProbabilityVector::point_mass(g.vertex_count(), v);
    LazyKernel::new(g).advance(&mut mu, t, &mut Vec::new());
    tv_distance(&mu, &pi)
}

/// Which start vertices a mixing-time measurement maximises over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Starts {
    /// Every vertex: the exact mixing time.
    All,
    /// An explicit list: a lower estimate of the mixing time.
    Vertices(Vec<usize>),
}

impl Starts {
    fn resolve(&self, nv: usize) -> Result<(Vec<usize>, bool)> {
        match self {
            Starts::All => Ok(((0..nv).collect(), true)),
            Starts::Vertices(v) => {
                if v.is_empty() {
                    return Err(Error::Precondition("start list is empty".into()));
                }
                if let Some(&bad) = v.iter().find(|&&x| x >= nv) {
                    return Err(Error::domain(format!("start vertex {bad} out of range {nv}")));
                }
                let mut v = v.clone();
                v.sort_unstable();
                v.dedup();
                let exact = v.len() == nv;
                Ok((v, exact))
            }
        }
    }
}

/// Heuristic start set for graphs too large for `Starts::All`: both ends of a
/// BFS double sweep, any caller-supplied extremes, and `random` uniform vertices.
pub fn heuristic_starts(g: &SmallWorldGraph, extra: &[usize], random: usize, seed: u64) -> Starts {
    let nv = g.vertex_count();
    let sweep = double_sweep(g, 0);
    let mut v = vec![sweep.from, sweep.to];
    v.extend_from_slice(extra);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    v.extend(index::sample(&mut rng, nv, random.min(nv)));
    v.sort_unstable();
    v.dedup();
    Starts::Vertices(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartCurve {
    pub vertex: usize,
    pub t_mix: u64,
    /// Every `(t, TV)` pair evaluated during the search for this start.
    pub samples: Vec<(u64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingEstimate {
    pub t_mix: u64,
    pub epsilon: f64,
    /// `true` when every vertex was a start, so `t_mix` is the exact mixing time.
    pub exact: bool,
    pub worst_start: usize,
    pub start_vertices: Vec<usize>,
    pub per_start: Vec<StartCurve>,
}

/// First `t` with `‖P^t(v,·) − π‖_TV ≤ ε`.
///
/// The distance is nonincreasing in `t`, so doubling brackets the answer and a
/// binary search restarted from the last checkpoint above `ε` pins it down.
fn start_mixing_time(kernel: &mut LazyKernel, pi: &ProbabilityVector, v: usize, eps: f64) -> Result<StartCurve> {
    let nv = pi.len();
    let mut buf = Vec::with_capacity(nv);
    let mut samples = Vec::new();
    let mut cur = ProbabilityVector::point_mass(nv, v);
    let tv0 = tv_distance(&cur, pi)?;
    samples.push((0, tv0));
    if tv0 <= eps {
        return Ok(StartCurve { vertex: v, t_mix: 0, samples });
    }

    let (mut lo, mut lo_vec) = (0u64, cur.clone());
    let mut t = 0u64;
    let mut next = 1u64;
    let hi = loop {
        if next > MAX_MIX_STEPS {
            return Err(Error::capacity(format!(
                "start {v} not within {eps} of stationarity after {MAX_MIX_STEPS} steps"
            )));
        }
        kernel.advance(&mut cur, next - t, &mut buf);
        t = next;
        let tv = tv_distance(&cur, pi)?;
        samples.push((t, tv));
        if tv <= eps {
            break t;
        }
        lo = t;
        lo_vec.0.clone_from(&cur.0);
        next *= 2;
    };

    let mut hi = hi;
    let mut probe = lo_vec.clone();
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        probe.0.clone_from(&lo_vec.0);
        kernel.advance(&mut probe, mid - lo, &mut buf);
        let tv = tv_distance(&probe, pi)?;
        samples.push((mid, tv));
        if tv <= eps {
            hi = mid;
        } else {
            lo = mid;
            std::mem::swap(&mut lo_vec, &mut probe);
        }
    }
    samples.sort_by_key(|s| s.0);
    Ok(StartCurve { vertex: v, t_mix: hi, samples })
}

/// Smallest `t` such that every start is within `ε` of stationarity.
pub fn mixing_time(g: &SmallWorldGraph, starts: &Starts, eps: f64) -> Result<MixingEstimate> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::domain(format!("ε = {eps} must lie in (0, 1]")));
    }
    let (start_vertices, exact) = starts.resolve(g.vertex_count())?;
    let pi = stationary(g);
    let per_start: Vec<StartCurve> = start_vertices
        .par_iter()
        .map_init(|| LazyKernel::new(g), |k, &v| start_mixing_time(k, &pi, v, eps))
        .collect::<Result<_>>()?;
    let worst = per_start
        .iter()
        .max_by(|a, b| a.t_mix.cmp(&b.t_mix).then(b.vertex.cmp(&a.vertex)))
        .expect("nonempty starts");
    Ok(MixingEstimate {
        t_mix: worst.t_mix,
        epsilon: eps,
        exact,
        worst_start: worst.vertex,
        start_vertices,
        per_start,
    })
}

/// `(t_rel − 1)·ln(1/(2ε))` and `t_rel·ln(1/(ε·π_min))` with `t_rel = 1/gap`.
pub fn relaxation_bounds(gap: f64, pi_min: f64, eps: f64) -> (f64, f64) {
    let t_rel = 1.0 / gap;
    ((t_rel - 1.0) * (1.0 / (2.0 * eps)).ln(), t_rel * (1.0 / (eps * pi_min)).ln())
}

/// A seeded trajectory `X_0 = v, X_1, …, X_t`.
pub fn sample_trajectory<R: Rng + ?Sized>(g: &SmallWorldGraph, v: usize, t: usize, rng: &mut R) -> Vec<usize> {
    let mut path = Vec::with_capacity(t + 1);
    let mut x = v;
    path.push(x);
    for _ in 0..t {
        if rng.random_bool(0.5) {
            let nb = g.neighbours(x);
            x = nb[rng.random_range(0..nb.len())] as usize;
        }
        path.push(x);
    }
    path
}
