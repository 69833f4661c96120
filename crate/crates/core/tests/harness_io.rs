//! End-to-end sweeps through files: formats, determinism and provenance.

use smallworld::harness::{self, read_records, Experiment, Format, Seeds, StartPolicy, SweepConfig};
use smallworld::Error;

fn small(experiment: Experiment) -> SweepConfig {
    let mut cfg = SweepConfig::new(experiment, vec![3, 5], vec![0.0, 2.0], Seeds::Derived { count: 3, base: 42 });
    cfg.pairs = 50;
    cfg
}

#[test]
fn every_experiment_round_trips_through_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    for experiment in [
        Experiment::Mix,
        Experiment::Conductance,
        Experiment::Diameter,
        Experiment::Routing,
        Experiment::Wq,
        Experiment::Expansion,
    ] {
        let cfg = small(experiment);
        for ext in ["csv", "json"] {
            let path = dir.path().join(format!("{experiment}.{ext}"));
            let records = harness::run_to_file(&cfg, &path).unwrap();
            assert!(!records.is_empty());
            let (back, manifest) = read_records(&path, Format::from_path(&path)).unwrap();
            assert_eq!(back, records, "{experiment} {ext}");
            assert_eq!(manifest, harness::manifest(&cfg, records.len()));
            assert!(records.iter().all(|r| r.experiment == experiment));
        }
    }
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    for ext in ["csv", "json"] {
        let mut bytes = Vec::new();
        for threads in [1, 1, 3] {
            let mut cfg = small(Experiment::Mix);
            cfg.threads = Some(threads);
            let path = dir.path().join(format!("t{threads}.{ext}"));
            harness::run_to_file(&cfg, &path).unwrap();
            bytes.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(bytes[0], bytes[1]);
        assert_eq!(bytes[0], bytes[2]);
    }
}

#[test]
fn records_come_out_in_canonical_order() {
    let recs = harness::run(&small(Experiment::Diameter)).unwrap();
    let keys: Vec<(u32, f64, u64)> = recs.iter().map(|r| (r.n, r.r, r.seed)).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
    assert_eq!(keys, sorted);
    assert_eq!(recs.len(), 2 * 2 * 3);
}

#[test]
fn seeds_are_derived_or_verbatim() {
    let derived = harness::run(&small(Experiment::Diameter)).unwrap();
    for r in &derived {
        assert_eq!(r.seed, harness::derive_seed(42, r.n, r.r, r.replicate));
    }
    let mut cfg = small(Experiment::Diameter);
    cfg.seeds = Seeds::List(vec![7, 9]);
    let listed = harness::run(&cfg).unwrap();
    assert!(listed.iter().all(|r| r.seed == [7, 9][r.replicate as usize]));
    assert_eq!(harness::manifest(&cfg, 1).seed_base, None);
}

#[test]
fn empty_output_creates_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("none.csv");
    let cfg = small(Experiment::Mix);
    let err = harness::emit(&[], Format::Csv, &path, &harness::manifest(&cfg, 0)).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
    assert!(!path.exists());
}

#[test]
fn exact_policy_refuses_large_tori_before_any_work() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.csv");
    let mut cfg = SweepConfig::new(Experiment::Mix, vec![3, 40], vec![1.0], Seeds::Derived { count: 1, base: 0 });
    cfg.starts = StartPolicy::All;
    let err = harness::run_to_file(&cfg, &path).unwrap_err();
    assert!(matches!(err, Error::Capacity(_)), "{err}");
    assert!(err.to_string().contains("n = 40"));
    assert!(!path.exists());
}

#[test]
fn config_file_drives_a_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("wq.json");
    let conf = dir.path().join("wq.conf");
    std::fs::write(
        &conf,
        format!(
            "# connected box-like sets\nexperiment = wq\nn = 4, 6\nr = 2.5\nseed_count = 4\nseed_base = 1\nell = 2\nq_max = 3\noutput = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let cfg = SweepConfig::load(&conf).unwrap();
    assert_eq!(cfg.output_format(), Format::Json);
    let recs = harness::run_to_file(&cfg, cfg.output.as_ref().unwrap()).unwrap();
    assert_eq!(recs.len(), 2 * 4 * 3);
    let (_, manifest) = read_records(&out, Format::Json).unwrap();
    assert_eq!(manifest.config_hash, cfg.hash());
    assert_eq!(manifest.seed_base, Some(1));

    let mut other = cfg.clone();
    other.threads = Some(2);
    other.output = None;
    assert_eq!(other.hash(), cfg.hash());
    other.ell = 3;
    assert_ne!(other.hash(), cfg.hash());
}

#[test]
fn csv_reals_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let recs = harness::run_to_file(&small(Experiment::Conductance), &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().last().unwrap().starts_with("# manifest"));
    let (back, _) = read_records(&path, Format::Csv).unwrap();
    for (a, b) in recs.iter().zip(&back) {
        assert_eq!(a.z.to_bits(), b.z.to_bits());
        assert_eq!(a.phi_ball.map(f64::to_bits), b.phi_ball.map(f64::to_bits));
    }
}
