//! `swg`: sample small-world torus graphs and run measurement sweeps.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use smallworld::harness::{self, Experiment, Format, Seeds, StartPolicy, SweepConfig};
use smallworld::{generator, Error, ModelParams};

#[derive(Parser)]
#[command(name = "swg", version, about = "Small-world torus graphs: sampling, mixing and expansion sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one graph and write it as an edge list.
    Generate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mixing time, diameter and spectral gap.
    Mix {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value = "auto", value_parser = parse::<StartPolicy>)]
        starts: StartPolicy,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
    },
    /// Ball and sweep-cut conductance.
    Conductance {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 0.9)]
        ball_frac: f64,
    },
    /// Counts of connected box-like sets.
    Wq {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[arg(long, default_value_t = 3)]
        qmax: usize,
    },
    /// Greedy routing between random pairs.
    Route {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        /// Defaults to 10·N.
        #[arg(long)]
        hop_cap: Option<usize>,
    },
    /// Run a sweep described by a `key = value` config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output` in the config file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = harness::THREADS_ENV)]
        threads: Option<usize>,
    },
}

#[derive(Args)]
struct Grid {
    /// Comma-separated torus radii.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u32>,
    /// Comma-separated decay exponents.
    #[arg(long, value_delimiter = ',', required = true)]
    r: Vec<f64>,
    /// Replicates per grid cell.
    #[arg(long, default_value_t = 1)]
    seeds: u32,
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    /// Output file (`.json` for JSON); CSV on stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse::<Format>)]
    format: Option<Format>,
    #[arg(long, env = harness::THREADS_ENV)]
    threads: Option<usize>,
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Grid {
    fn config(self, experiment: Experiment) -> SweepConfig {
        let mut cfg = SweepConfig::new(
            experiment,
            self.n,
            self.r,
            Seeds::Derived {
                count: self.seeds,
                base: self.seed_base,
            },
        );
        cfg.output = self.out;
        cfg.format = self.format;
        cfg.threads = self.threads;
        cfg
    }
}

fn run_sweep(cfg: SweepConfig) -> smallworld::Result<()> {
    match cfg.output.clone() {
        Some(path) => {
            let records = harness::run_to_file(&cfg, &path)?;
            eprintln!("wrote {} records to {}", records.len(), path.display());
        }
        None => {
            let records = harness::run(&cfg)?;
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            harness::write_records(&records, cfg.output_format(), &mut lock, &harness::manifest(&cfg, records.len()))?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn execute(command: Command) -> smallworld::Result<()> {
    match command {
        Command::Generate { n, r, seed, out } => {
            let g = generator::sample_graph(ModelParams::new(n, r, seed)?)?;
            generator::save_graph(&g, &out)?;
            eprintln!(
                "N = {}, |E| = {}, long-range edges = {}, Z = {}",
                g.vertex_count(),
                g.edge_count(),
                g.long_range_edges().len(),
                g.z()
            );
            Ok(())
        }
        Command::Mix { grid, starts, epsilon } => {
            let mut cfg = grid.config(Experiment::Mix);
            cfg.starts = starts;
            cfg.epsilon = epsilon;
            run_sweep(cfg)
        }
        Command::Conductance { grid, ball_frac } => {
            let mut cfg = grid.config(Experiment::Conductance);
            cfg.ball_frac = ball_frac;
            run_sweep(cfg)
        }
        Command::Wq { grid, ell, qmax } => {
            let mut cfg = grid.config(Experiment::Wq);
            cfg.ell = ell;
            cfg.q_max = qmax;
            run_sweep(cfg)
        }
        Command::Route { grid, pairs, hop_cap } => {
            let mut cfg = grid.config(Experiment::Routing);
            cfg.pairs = pairs;
            cfg.hop_cap = hop_cap;
            run_sweep(cfg)
        }
        Command::Sweep { config, out, threads } => {
            let mut cfg = SweepConfig::load(&config)?;
            if out.is_some() {
                cfg.output = out;
            }
            if threads.is_some() {
                cfg.threads = threads;
            }
            run_sweep(cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("swg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
