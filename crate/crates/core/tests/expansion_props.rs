//! Expansion, boundary and conductance checks against brute force and
//! pilot-calibrated trends.

mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallworld::expansion::{
    ball_set, conductance, degree_sum, edge_boundary, edge_boundary_size, is_expanding, min_conductance_bruteforce,
    sweep_cut, vertex_boundary, CutReport,
};
use smallworld::{sample_graph, LPartition, ModelParams, SmallWorldGraph, VertexSet};

fn graph(n: u32, r: f64, seed: u64) -> SmallWorldGraph {
    sample_graph(ModelParams::new(n, r, seed).unwrap()).unwrap()
}

#[test]
fn expansion_check_matches_subset_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..1000u64 {
        let g = graph(rng.random_range(2..7), rng.random_range(0.0..4.0), case);
        let nv = g.vertex_count();
        let size = rng.random_range(1..=15usize.min(nv - 1));
        let s = if case % 2 == 0 {
            random_connected_set(&g, rng.random_range(0..nv), size, &mut rng)
        } else {
            random_set(nv, size, &mut rng)
        };
        let eps = rng.random_range(0.01..0.99);
        let c = rng.random_range(0.05..4.0);
        let verdict = is_expanding(&g, &s, eps, c).unwrap();
        assert_eq!(verdict.holds, brute_is_expanding(&g, &s, eps, c), "case {case}: ε={eps} c={c}");
        if let Some(w) = verdict.witness {
            assert!((w.min_outgoing as f64) < c * w.subset_size as f64);
        }
    }
}

#[test]
fn brute_force_minimum_bounds() {
    for seed in 0..6 {
        let g = graph(2, seed as f64 * 0.8, seed);
        let (phi, set) = min_conductance_bruteforce(&g, false).unwrap();
        assert_eq!(conductance(&g, &set).unwrap(), phi);
        let (phi_conn, _) = min_conductance_bruteforce(&g, true).unwrap();
        assert!(phi_conn >= phi);
        let sweep = sweep_cut(&g).unwrap();
        assert_eq!(sweep.reports.len(), g.vertex_count() - 1);
        assert!(sweep.best().1.conductance >= phi);
        for radius in 1..=2 {
            assert!(phi <= conductance(&g, &ball_set(g.torus(), radius).unwrap()).unwrap());
        }
    }
}

/// The empirical `M` in `Σ_{v∈S} d_v ≤ M|S| + |∂S|` does not grow with `n`.
#[test]
fn average_degree_fit_is_bounded() {
    let mut fits = Vec::new();
    for n in [10u32, 20, 40] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let mut m_hat = 0.0f64;
        for s in 0..500u64 {
            let g = graph(n, 1.0, s);
            let nv = g.vertex_count();
            let size = rng.random_range(1..nv / 2);
            let set = if s % 2 == 0 {
                random_connected_set(&g, rng.random_range(0..nv), size, &mut rng)
            } else {
                random_set(nv, size, &mut rng)
            };
            let inner = degree_sum(&g, &set) as f64 - edge_boundary_size(&g, &set) as f64;
            m_hat = m_hat.max(inner / set.len() as f64);
        }
        fits.push(m_hat);
    }
    // pilot: 3.35, 3.31, 3.22
    assert!(fits.iter().all(|&m| m <= 30.0), "{fits:?}");
    assert!(fits[2] <= 1.25 * fits[0], "{fits:?}");
}

/// Connected sets carry `O(max{|S|, log n})` total degree.
#[test]
fn connected_degree_sums_are_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let worst = (0..200u64)
        .map(|s| {
            let g = graph(20, 2.0, s);
            let size = rng.random_range(1..=60);
            let set = random_connected_set(&g, rng.random_range(0..g.vertex_count()), size, &mut rng);
            degree_sum(&g, &set) as f64 / (set.len() as f64).max(20f64.ln())
        })
        .fold(0.0, f64::max);
    // pilot maximum 5.8
    assert!(worst <= 10.0, "{worst}");
}

/// Box-like blocks at `r = 2` have vertex boundary of order `|S|·log(1/α)/log n`.
#[test]
fn vertex_expansion_at_critical_exponent() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 40u32;
    let mut above = 0;
    for s in 0..200u64 {
        let g = graph(n, 2.0, s);
        let p = LPartition::new(*g.torus(), 4).unwrap();
        let k = (p.len() as f64).sqrt() as usize;
        let alpha_target: f64 = rng.random_range(0.1..0.5);
        let w = rng.random_range(((alpha_target * k as f64).ceil() as usize)..=k);
        let h = ((alpha_target * (k * k) as f64) / w as f64).ceil() as usize;
        let set = box_block(&p, rng.random_range(0..k), rng.random_range(0..k), w, h.min(k));
        assert!(p.is_box_like(&set));
        let alpha = set.len() as f64 / g.vertex_count() as f64;
        let stat = vertex_boundary(&g, &set).len() as f64 * (n as f64).ln() / (set.len() as f64 * (1.0 / alpha).ln());
        // pilot on other seeds: 5th percentile 0.89, minimum 0.80
        if stat >= 0.6 {
            above += 1;
        }
    }
    assert!(above >= 190, "{above}/200");
}

/// Large compact sets at `r = 1` are `(0.1, 0.05)`-expanding.
#[test]
fn large_sets_expand_below_critical_exponent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 40u32;
    let mut pass = 0;
    for s in 0..200u64 {
        let g = graph(n, 1.0, s);
        let nv = g.vertex_count();
        let side = g.torus().side();
        let area = rng.random_range(nv / 10..=nv / 2);
        let w = rng.random_range(area.div_ceil(side)..=side);
        let h = area.div_ceil(w).min(side);
        let (i0, j0) = (rng.random_range(0..side), rng.random_range(0..side));
        let set = VertexSet::from_indices(
            nv,
            (0..w).flat_map(|a| (0..h).map(move |b| ((i0 + a) % side) * side + (j0 + b) % side)),
        );
        assert!(set.len() >= nv / 10);
        pass += is_expanding(&g, &set, 0.1, 0.05).unwrap().holds as usize;
    }
    assert!(pass >= 190, "{pass}/200");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cut_report_invariants(n in 1u32..8, r in 0.0f64..4.0, seed: u64, bits in prop::collection::vec(any::<bool>(), 225)) {
        let g = graph(n, r, seed);
        let nv = g.vertex_count();
        let s = VertexSet::from_indices(nv, (0..nv).filter(|&v| bits[v % bits.len()] ^ (v % 7 == 0)));
        if s.is_empty() || s.len() == nv {
            return Ok(());
        }
        let rep = CutReport::new(&g, &s).unwrap();
        prop_assert!(rep.edge_boundary >= rep.vertex_boundary);
        prop_assert!(rep.edge_boundary >= rep.torus_edge_boundary);
        prop_assert!(rep.conductance > 0.0);
        prop_assert_eq!(rep.conductance, conductance(&g, &s.complement()).unwrap());
        let torus_edges = g.torus().edge_boundary(&s);
        let all = edge_boundary(&g, &s);
        prop_assert!(torus_edges.iter().all(|e| all.contains(e)));
        prop_assert_eq!(rep.degree_sum, s.iter().map(|v| g.degree(v)).sum::<usize>());
    }
}
