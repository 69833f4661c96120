//! Greedy routing hop counts across decay exponents.

use smallworld::harness::{self, medians_by_cell, Experiment, Seeds, SweepConfig};

fn medians(r: f64) -> Vec<f64> {
    let mut cfg = SweepConfig::new(Experiment::Routing, vec![64, 128, 256], vec![r], Seeds::Derived { count: 20, base: 0 });
    cfg.pairs = 200;
    let recs = harness::run(&cfg).unwrap();
    assert!(recs.iter().all(|x| x.routing_delivered == x.routing_pairs));
    medians_by_cell(&recs, |x| x.routing_hops_median).into_iter().map(|(_, m)| m).collect()
}

fn slope(hops: &[f64]) -> f64 {
    // least squares of ln hops on ln n
    let xs: Vec<f64> = [64f64, 128.0, 256.0].iter().map(|n| n.ln()).collect();
    let ys: Vec<f64> = hops.iter().map(|h| h.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

#[test]
fn critical_exponent_routes_polylogarithmically() {
    let uniform = medians(0.0);
    let critical = medians(2.0);
    let (s0, s2) = (slope(&uniform), slope(&critical));
    // pilot: hops 25, 41, 64 at r = 0 and 23, 33, 45 at r = 2
    assert!(s0 >= 0.5, "r = 0 slope {s0} ({uniform:?})");
    assert!(s2 <= s0 - 0.1, "slopes {s2} vs {s0}");
    let log_ratio = (513f64 * 513.0).ln() / (129f64 * 129.0).ln();
    assert!(critical[2] / critical[0] <= 1.5 * log_ratio * log_ratio, "{critical:?}");
}
