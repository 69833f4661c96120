//! Grid sweeps over `(n, r, replicate)`.

use rayon::prelude::*;

use super::config::{Experiment, StartPolicy, SweepConfig, EXACT_MIX_CAP};
use super::median;
use super::record::ExperimentRecord;
use super::routing::route_random_pairs;
use crate::error::{Error, Result};
use crate::expansion::{
    ball_set, diameter, enumerate_connected_boxsets, is_expanding, sweep_cut, wq_bound, CutReport,
    EXACT_DIAMETER_CAP,
};
use crate::generator::{sample_graph, ModelParams};
use crate::graph::SmallWorldGraph;
use crate::torus::LPartition;
use crate::walk::{heuristic_starts, mixing_time, relaxation_bounds, spectral_gap, Starts};

/// Salts separating auxiliary random streams from the graph's own seed.
const START_SALT: u64 = 0x7374_6172_7473_0001;
const ROUTE_SALT: u64 = 0x726f_7574_6573_0001;

struct Cell {
    params: ModelParams,
    replicate: u32,
}

fn cells(cfg: &SweepConfig) -> Result<Vec<Cell>> {
    let mut out = Vec::new();
    for &n in &cfg.n_values {
        for &r in &cfg.r_values {
            for rep in 0..cfg.seeds.len() as u32 {
                out.push(Cell {
                    params: ModelParams::new(n, r, cfg.seeds.instance_seed(n, r, rep))?,
                    replicate: rep,
                });
            }
        }
    }
    Ok(out)
}

/// Samples every grid instance on a pool of `cfg.thread_budget()` workers and
/// returns the records in canonical order. The first failing cell in grid
/// order determines the error, whatever the schedule.
fn run_grid<F>(cfg: &SweepConfig, per_graph: F) -> Result<Vec<ExperimentRecord>>
where
    F: Fn(&SmallWorldGraph, u32) -> Result<Vec<ExperimentRecord>> + Sync,
{
    cfg.validate()?;
    let cells = cells(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.thread_budget())
        .build()
        .map_err(|e| Error::domain(format!("thread pool: {e}")))?;
    let results: Vec<Result<Vec<ExperimentRecord>>> = pool.install(|| {
        cells
            .par_iter()
            .map(|c| per_graph(&sample_graph(c.params)?, c.replicate))
            .collect()
    });
    let mut records = Vec::new();
    for r in results {
        records.extend(r?);
    }
    ExperimentRecord::sort_canonical(&mut records);
    Ok(records)
}

fn exact_diameter_allowed(g: &SmallWorldGraph) -> bool {
    g.vertex_count() <= EXACT_DIAMETER_CAP
}

fn ball_radius(cfg: &SweepConfig, n: u32) -> u32 {
    ((cfg.ball_frac * n as f64).floor() as u32).max(1)
}

/// Mixing time, diameter and spectral gap per instance.
pub fn run_mixing_sweep(cfg: &SweepConfig) -> Result<Vec<ExperimentRecord>> {
    if cfg.starts == StartPolicy::All {
        if let Some(&n) = cfg.n_values.iter().find(|&&n| (2 * n as usize + 1).pow(2) > EXACT_MIX_CAP) {
            return Err(Error::capacity(format!(
                "exact mixing time needs N ≤ {EXACT_MIX_CAP}; n = {n} has N = {}",
                (2 * n as usize + 1).pow(2)
            )));
        }
    }
    run_grid(cfg, |g, rep| {
        let nv = g.vertex_count();
        let diam = diameter(g, exact_diameter_allowed(g))?;
        let all = match cfg.starts {
            StartPolicy::All => true,
            StartPolicy::Heuristic => false,
            StartPolicy::Auto => nv <= EXACT_MIX_CAP,
        };
        let starts = if all {
            Starts::All
        } else {
            let (a, b) = diam.endpoints;
            heuristic_starts(g, &[a, b], cfg.random_starts, g.params().seed ^ START_SALT)
        };
        let mix = mixing_time(g, &starts, cfg.epsilon)?;
        let gap = spectral_gap(g)?.gap;
        let min_degree = (0..nv).map(|v| g.degree(v)).min().unwrap_or(1);
        let pi_min = min_degree as f64 / (2 * g.edge_count()) as f64;
        let (lower, upper) = relaxation_bounds(gap, pi_min, cfg.epsilon);
        let mut rec = ExperimentRecord::base(Experiment::Mix, g, rep);
        rec.t_mix = Some(mix.t_mix);
        rec.t_mix_exact = Some(mix.exact);
        rec.mix_starts = Some(mix.start_vertices.len());
        rec.epsilon = Some(cfg.epsilon);
        rec.diameter = Some(diam.value);
        rec.diameter_exact = Some(diam.exact);
        rec.gap = Some(gap);
        rec.relax_lower = Some(lower);
        rec.relax_upper = Some(upper);
        Ok(vec![rec])
    })
}

/// Ball cut at radius `⌊ball_frac·n⌋` and the best spectral sweep cut.
pub fn run_conductance_sweep(cfg: &SweepConfig) -> Result<Vec<ExperimentRecord>> {
    run_grid(cfg, |g, rep| {
        let radius = ball_radius(cfg, g.params().n);
        let ball = CutReport::new(g, &ball_set(g.torus(), radius)?)?;
        let sweep = sweep_cut(g)?;
        let (_, best) = sweep.best();
        let mut rec = ExperimentRecord::base(Experiment::Conductance, g, rep);
        rec.ball_radius = Some(radius);
        rec.ball_size = Some(ball.set_size);
        rec.ball_edge_boundary = Some(ball.edge_boundary);
        rec.ball_torus_boundary = Some(ball.torus_edge_boundary);
        rec.ball_vertex_boundary = Some(ball.vertex_boundary);
        rec.phi_ball = Some(ball.conductance);
        rec.phi_sweep_min = Some(best.conductance);
        rec.sweep_size = Some(best.set_size);
        rec.gap = Some(sweep.gap);
        Ok(vec![rec])
    })
}

pub fn run_diameter_sweep(cfg: &SweepConfig) -> Result<Vec<ExperimentRecord>> {
    run_grid(cfg, |g, rep| {
        let d = diameter(g, exact_diameter_allowed(g))?;
        let mut rec = ExperimentRecord::base(Experiment::Diameter, g, rep);
        rec.diameter = Some(d.value);
        rec.diameter_exact = Some(d.exact);
        Ok(vec![rec])
    })
}

/// Connected `q`-box sets for `q = 1..=q_max`, one record per `(seed, q)`,
/// each carrying the mean over seeds and the expectation bound.
pub fn run_wq_experiment(cfg: &SweepConfig) -> Result<Vec<ExperimentRecord>> {
    let mut records = run_grid(cfg, |g, rep| {
        let partition = LPartition::new(*g.torus(), cfg.ell)?;
        (1..=cfg.q_max)
            .map(|q| {
                let mut rec = ExperimentRecord::base(Experiment::Wq, g, rep);
                rec.ell = Some(cfg.ell);
                rec.q = Some(q);
                rec.w_q = Some(enumerate_connected_boxsets(g, &partition, q)?);
                rec.w_q_bound = Some(wq_bound(g.params().n, cfg.ell, q));
                Ok(rec)
            })
            .collect()
    })?;
    let key = |r: &ExperimentRecord| (r.n, r.r.to_bits(), r.q);
    let mut groups: std::collections::BTreeMap<_, (u64, usize)> = Default::default();
    for rec in &records {
        let e = groups.entry(key(rec)).or_default();
        e.0 += rec.w_q.unwrap_or(0);
        e.1 += 1;
    }
    for rec in &mut records {
        let (sum, count) = groups[&key(rec)];
        rec.w_q_mean = Some(sum as f64 / count as f64);
    }
    Ok(records)
}

/// Greedy routing between `cfg.pairs` random pairs per instance.
pub fn run_routing_sweep(cfg: &SweepConfig) -> Result<Vec<ExperimentRecord>> {
    run_grid(cfg, |g, rep| {
        let cap = cfg.hop_cap.unwrap_or(10 * g.vertex_count());
        let s = route_random_pairs(g, cfg.pairs, cap, g.params().seed ^ ROUTE_SALT)?;
        let mut rec = ExperimentRecord::base(Experiment::Routing, g, rep);
        rec.routing_pairs = Some(s.pairs);
        rec.routing_delivered = Some(s.delivered);
        rec.routing_hops_median = Some(s.hops_median);
        rec.routing_hops_mean = Some(s.hops_mean);
        rec.routing_hops_max = Some(s.hops_max);
        rec.routing_distance_mean = Some(s.distance_mean);
        Ok(vec![rec])
    })
}

/// `(ε, c)`-expansion of the ball at radius `⌊ball_frac·n⌋`.
pub fn run_expansion_sweep(cfg: &SweepConfig) -> Result<Vec<ExperimentRecord>> {
    run_grid(cfg, |g, rep| {
        let radius = ball_radius(cfg, g.params().n);
        let set = ball_set(g.torus(), radius)?;
        let ball = CutReport::new(g, &set)?;
        let verdict = is_expanding(g, &set, cfg.expansion_eps, cfg.expansion_c)?;
        let mut rec = ExperimentRecord::base(Experiment::Expansion, g, rep);
        rec.ball_radius = Some(radius);
        rec.ball_size = Some(ball.set_size);
        rec.ball_edge_boundary = Some(ball.edge_boundary);
        rec.ball_torus_boundary = Some(ball.torus_edge_boundary);
        rec.ball_vertex_boundary = Some(ball.vertex_boundary);
        rec.phi_ball = Some(ball.conductance);
        rec.expansion_eps = Some(cfg.expansion_eps);
        rec.expansion_c = Some(cfg.expansion_c);
        rec.expansion_holds = Some(verdict.holds);
        rec.expansion_witness_size = verdict.witness.map(|w| w.subset_size);
        Ok(vec![rec])
    })
}

/// Median of a per-`(n, r)` column, in grid order.
pub fn medians_by_cell(
    records: &[ExperimentRecord],
    value: impl Fn(&ExperimentRecord) -> Option<f64>,
) -> Vec<((u32, f64), f64)> {
    let mut out: Vec<((u32, f64), Vec<f64>)> = Vec::new();
    for rec in records {
        let Some(v) = value(rec) else { continue };
        match out.iter_mut().find(|(k, _)| k.0 == rec.n && k.1.to_bits() == rec.r.to_bits()) {
            Some((_, vals)) => vals.push(v),
            None => out.push(((rec.n, rec.r), vec![v])),
        }
    }
    out.into_iter().map(|(k, mut v)| (k, median(&mut v))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::Seeds;

    fn cfg(experiment: Experiment, n: Vec<u32>, r: Vec<f64>, count: u32) -> SweepConfig {
        let mut c = SweepConfig::new(experiment, n, r, Seeds::Derived { count, base: 3 });
        c.threads = Some(1);
        c
    }

    #[test]
    fn mixing_records_satisfy_bounds() {
        let recs = run_mixing_sweep(&cfg(Experiment::Mix, vec![3, 11], vec![1.0, 3.0], 2)).unwrap();
        assert_eq!(recs.len(), 8);
        for r in &recs {
            let t = r.t_mix.unwrap() as f64;
            assert!(3.0 * t >= r.diameter.unwrap() as f64, "{r:?}");
            assert!(r.relax_lower.unwrap() <= t && t <= r.relax_upper.unwrap(), "{r:?}");
            assert_eq!(r.t_mix_exact.unwrap(), r.vertex_count <= EXACT_MIX_CAP);
        }
    }

    #[test]
    fn exact_request_too_large_names_n() {
        let mut c = cfg(Experiment::Mix, vec![4, 10], vec![1.0], 1);
        c.starts = StartPolicy::All;
        match run_mixing_sweep(&c) {
            Err(Error::Capacity(msg)) => assert!(msg.contains("n = 10"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wq_means_and_singletons() {
        let mut c = cfg(Experiment::Wq, vec![6], vec![2.0], 4);
        c.ell = 2;
        c.q_max = 2;
        let recs = run_wq_experiment(&c).unwrap();
        assert_eq!(recs.len(), 8);
        for r in recs.iter().filter(|r| r.q == Some(1)) {
            assert_eq!(r.w_q, Some(36));
            assert_eq!(r.w_q_mean, Some(36.0));
        }
        let pairs: Vec<_> = recs.iter().filter(|r| r.q == Some(2)).collect();
        let mean = pairs.iter().map(|r| r.w_q.unwrap() as f64).sum::<f64>() / 4.0;
        assert!(pairs.iter().all(|r| r.w_q_mean == Some(mean)));

        c.ell = 1;
        c.n_values = vec![3];
        c.q_max = 1;
        assert_eq!(run_wq_experiment(&c).unwrap()[0].w_q, Some(49));
    }

    #[test]
    fn thread_budget_does_not_change_results() {
        let mut c = cfg(Experiment::Conductance, vec![4, 6], vec![2.5], 3);
        let one = run_conductance_sweep(&c).unwrap();
        c.threads = Some(3);
        assert_eq!(run_conductance_sweep(&c).unwrap(), one);
        for r in &one {
            assert_eq!(r.ball_radius, Some(((0.9 * r.n as f64) as u32).max(1)));
            assert!(r.phi_sweep_min.unwrap() > 0.0);
        }
    }

    #[test]
    fn routing_and_expansion_and_diameter_run() {
        let c = cfg(Experiment::Routing, vec![8], vec![0.0, 2.0], 2);
        for r in run_routing_sweep(&c).unwrap() {
            assert_eq!(r.routing_delivered, r.routing_pairs);
        }
        let c = cfg(Experiment::Expansion, vec![5], vec![4.0], 2);
        assert_eq!(run_expansion_sweep(&c).unwrap().len(), 2);
        let c = cfg(Experiment::Diameter, vec![5], vec![0.0], 2);
        assert!(run_diameter_sweep(&c).unwrap().iter().all(|r| r.diameter_exact == Some(true)));
    }

    #[test]
    fn medians_group_by_cell() {
        let c = cfg(Experiment::Diameter, vec![3, 4], vec![1.0], 3);
        let recs = run_diameter_sweep(&c).unwrap();
        let m = medians_by_cell(&recs, |r| r.diameter.map(f64::from));
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].0, (3, 1.0));
    }
}
