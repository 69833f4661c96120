//! Pilot runs used to calibrate the scaling checks.
//!
//! `cargo run --release --example pilot -- <mix1|mix2|mix4|conductance|diameter|routing|wq> [seeds] [out.csv]`
//!
//! Committed outputs live in `tests/data/pilot_<name>.csv`.

use std::time::Instant;

use smallworld::harness::{self, medians_by_cell, Experiment, Seeds, SweepConfig};

fn main() -> smallworld::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(String::as_str).unwrap_or("mix");
    let seeds: u32 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(20);
    let (experiment, n, r): (Experiment, Vec<u32>, Vec<f64>) = match which {
        "mix1" => (Experiment::Mix, vec![8, 12, 16, 24, 32], vec![1.0]),
        "mix2" => (Experiment::Mix, vec![8, 16, 32], vec![2.0]),
        "mix4" => (Experiment::Mix, vec![8, 16, 32], vec![4.0]),
        "conductance" => (Experiment::Conductance, vec![20, 40, 80], vec![2.5, 3.0, 4.0]),
        "diameter" => (Experiment::Diameter, vec![20, 40, 80], vec![1.0]),
        "routing" => (Experiment::Routing, vec![64, 128, 256], vec![0.0, 2.0]),
        "wq" => (Experiment::Wq, vec![6], vec![0.0, 1.0, 2.0, 3.0]),
        other => panic!("unknown pilot {other}"),
    };
    let mut cfg = SweepConfig::new(experiment, n, r, Seeds::Derived { count: seeds, base: 0 });
    if experiment == Experiment::Conductance {
        // ball statistics only need the expansion sweep, which skips the eigensolver
        cfg.experiment = Experiment::Expansion;
    }
    let start = Instant::now();
    let records = match args.get(3) {
        Some(path) => harness::run_to_file(&cfg, std::path::Path::new(path))?,
        None => harness::run(&cfg)?,
    };
    eprintln!("{which}: {} records in {:.1?}", records.len(), start.elapsed());
    let columns: [(&str, fn(&harness::ExperimentRecord) -> Option<f64>); 8] = [
        ("t_mix", |r| r.t_mix.map(|t| t as f64)),
        ("t_mix/lnN", |r| r.t_mix.map(|t| t as f64 / (r.vertex_count as f64).ln())),
        ("diam", |r| r.diameter.map(f64::from)),
        ("diam/lnN", |r| r.diameter.map(|d| d as f64 / (r.vertex_count as f64).ln())),
        ("relax_lower/t_mix", |r| Some(r.relax_lower? / r.t_mix? as f64)),
        ("ball_cut", |r| r.ball_edge_boundary.map(|b| b as f64)),
        ("hops", |r| r.routing_hops_median),
        ("w_q", |r| r.w_q.map(|w| w as f64)),
    ];
    for (name, f) in columns {
        let m = medians_by_cell(&records, f);
        if !m.is_empty() {
            println!("{name}: {m:?}");
        }
    }
    Ok(())
}
