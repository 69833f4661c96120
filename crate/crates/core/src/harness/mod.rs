//! Parameter sweeps, greedy routing and tidy output for downstream plotting.

mod config;
mod experiments;
mod record;
mod routing;

use std::path::Path;

pub use config::{
    derive_seed, Experiment, Format, Seeds, StartPolicy, SweepConfig, EXACT_MIX_CAP, THREADS_ENV,
};
pub use experiments::{
    medians_by_cell, run_conductance_sweep, run_diameter_sweep, run_expansion_sweep, run_mixing_sweep,
    run_routing_sweep, run_wq_experiment,
};
pub use record::{emit, read_records, write_records, ExperimentRecord, Manifest, VERSION};
pub use routing::{greedy_route, route_random_pairs, RoutingResult, RoutingSummary};

use crate::error::Result;

/// Median of a nonempty slice (mean of the two middle values for even length).
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty slice");
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}

/// Runs the experiment named in `cfg`.
pub fn run(cfg: &SweepConfig) -> Result<Vec<ExperimentRecord>> {
    match cfg.experiment {
        Experiment::Mix => run_mixing_sweep(cfg),
        Experiment::Conductance => run_conductance_sweep(cfg),
        Experiment::Diameter => run_diameter_sweep(cfg),
        Experiment::Routing => run_routing_sweep(cfg),
        Experiment::Wq => run_wq_experiment(cfg),
        Experiment::Expansion => run_expansion_sweep(cfg),
    }
}

pub fn manifest(cfg: &SweepConfig, records: usize) -> Manifest {
    Manifest {
        version: VERSION.to_owned(),
        experiment: cfg.experiment,
        config_hash: cfg.hash(),
        seed_base: cfg.seeds.base(),
        records,
    }
}

/// Runs `cfg` and writes the records to `path`, in `cfg.format` if set and
/// otherwise in the format implied by the extension.
pub fn run_to_file(cfg: &SweepConfig, path: &Path) -> Result<Vec<ExperimentRecord>> {
    let records = run(cfg)?;
    let format = cfg.format.unwrap_or_else(|| Format::from_path(path));
    emit(&records, format, path, &manifest(cfg, records.len()))?;
    Ok(records)
}
