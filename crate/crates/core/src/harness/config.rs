//! Sweep configuration and its flat `key = value` file format.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    #[default]
    Mix,
    Conductance,
    Diameter,
    Routing,
    Wq,
    Expansion,
}

impl Experiment {
    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::Mix => "mix",
            Experiment::Conductance => "conductance",
            Experiment::Diameter => "diameter",
            Experiment::Routing => "routing",
            Experiment::Wq => "wq",
            Experiment::Expansion => "expansion",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "mix" => Experiment::Mix,
            "conductance" => Experiment::Conductance,
            "diameter" => Experiment::Diameter,
            "routing" | "route" => Experiment::Routing,
            "wq" => Experiment::Wq,
            "expansion" => Experiment::Expansion,
            _ => return Err(Error::domain(format!("unknown experiment {s:?}"))),
        })
    }
}

/// How mixing-time starts are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartPolicy {
    /// Every vertex; only allowed up to [`EXACT_MIX_CAP`] vertices.
    All,
    /// Double-sweep ends, diametral pair and random vertices.
    Heuristic,
    /// `All` where allowed, otherwise `Heuristic`.
    Auto,
}

/// Largest vertex count for which exact (all-start) mixing times are computed.
pub const EXACT_MIX_CAP: usize = 400;

impl FromStr for StartPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => StartPolicy::All,
            "heuristic" => StartPolicy::Heuristic,
            "auto" => StartPolicy::Auto,
            _ => return Err(Error::domain(format!("unknown start policy {s:?}"))),
        })
    }
}

impl fmt::Display for StartPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StartPolicy::All => "all",
            StartPolicy::Heuristic => "heuristic",
            StartPolicy::Auto => "auto",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// `json` for a `.json` extension, `csv` otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::domain(format!("unknown output format {s:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Replicate seeds: an explicit list used verbatim, or `count` replicates whose
/// instance seeds are derived from `base` (see [`derive_seed`]).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Seeds {
    List(Vec<u64>),
    Derived { count: u32, base: u64 },
}

impl Seeds {
    pub fn len(&self) -> usize {
        match self {
            Seeds::List(v) => v.len(),
            Seeds::Derived { count, .. } => *count as usize,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn base(&self) -> Option<u64> {
        match self {
            Seeds::List(_) => None,
            Seeds::Derived { base, .. } => Some(*base),
        }
    }

    /// Instance seed of replicate `rep` in grid cell `(n, r)`.
    pub fn instance_seed(&self, n: u32, r: f64, rep: u32) -> u64 {
        match self {
            Seeds::List(v) => v[rep as usize],
            Seeds::Derived { base, .. } => derive_seed(*base, n, r, rep),
        }
    }
}

/// SplitMix64 output function.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable instance seed: SplitMix64 folded over `base`, `n`, the IEEE bits of
/// `r` and the replicate index, in that order.
pub fn derive_seed(base: u64, n: u32, r: f64, replicate: u32) -> u64 {
    [n as u64, r.to_bits(), replicate as u64]
        .iter()
        .fold(mix64(base), |h, &x| mix64(h ^ x))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub experiment: Experiment,
    pub n_values: Vec<u32>,
    pub r_values: Vec<f64>,
    pub seeds: Seeds,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub starts: StartPolicy,
    /// Worker threads; `None` defers to `SWG_THREADS`, then the core count.
    pub threads: Option<usize>,
    /// Total-variation threshold of the mixing time.
    pub epsilon: f64,
    /// Random starts added under the heuristic policy.
    pub random_starts: usize,
    /// Ball radius as a fraction of `n`.
    pub ball_frac: f64,
    pub ell: usize,
    pub q_max: usize,
    pub pairs: usize,
    /// `None` means `10·N`.
    pub hop_cap: Option<usize>,
    pub expansion_eps: f64,
    pub expansion_c: f64,
}

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "SWG_THREADS";

impl SweepConfig {
    pub fn new(experiment: Experiment, n_values: Vec<u32>, r_values: Vec<f64>, seeds: Seeds) -> Self {
        Self {
            experiment,
            n_values,
            r_values,
            seeds,
            output: None,
            format: None,
            starts: StartPolicy::Auto,
            threads: None,
            epsilon: 0.25,
            random_starts: 32,
            ball_frac: 0.9,
            ell: 2,
            q_max: 3,
            pairs: 1000,
            hop_cap: None,
            expansion_eps: 0.5,
            expansion_c: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.r_values.is_empty() || self.seeds.is_empty() {
            return Err(Error::domain("n, r and seeds must all be nonempty"));
        }
        if self.n_values.contains(&0) {
            return Err(Error::domain("every n must be at least 1"));
        }
        if let Some(r) = self.r_values.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(Error::domain(format!("every r must be finite and nonnegative, got {r}")));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::domain(format!("epsilon {} outside (0, 1]", self.epsilon)));
        }
        if !(self.ball_frac > 0.0 && self.ball_frac <= 1.0) {
            return Err(Error::domain(format!("ball_frac {} outside (0, 1]", self.ball_frac)));
        }
        if self.ell == 0 || self.q_max == 0 {
            return Err(Error::domain("ell and q_max must be at least 1"));
        }
        if self.hop_cap == Some(0) {
            return Err(Error::domain("hop_cap must be at least 1"));
        }
        if self.threads == Some(0) {
            return Err(Error::domain("threads must be at least 1"));
        }
        Ok(())
    }

    pub fn output_format(&self) -> Format {
        self.format
            .or_else(|| self.output.as_deref().map(Format::from_path))
            .unwrap_or(Format::Csv)
    }

    /// Worker count: explicit budget, then `SWG_THREADS`, then available cores.
    pub fn thread_budget(&self) -> usize {
        self.threads
            .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse().ok()))
            .filter(|&t| t > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    /// Canonical key-value rendering of every field that affects results.
    /// Output path, format and thread budget are excluded.
    pub fn canonical(&self) -> String {
        let join = |v: Vec<String>| v.join(",");
        let mut lines = vec![
            format!("experiment = {}", self.experiment),
            format!("n = {}", join(self.n_values.iter().map(|n| n.to_string()).collect())),
            format!("r = {}", join(self.r_values.iter().map(|r| format!("{r:?}")).collect())),
        ];
        match &self.seeds {
            Seeds::List(v) => lines.push(format!("seeds = {}", join(v.iter().map(|s| s.to_string()).collect()))),
            Seeds::Derived { count, base } => {
                lines.push(format!("seed_count = {count}"));
                lines.push(format!("seed_base = {base}"));
            }
        }
        lines.extend([
            format!("starts = {}", self.starts),
            format!("epsilon = {:?}", self.epsilon),
            format!("random_starts = {}", self.random_starts),
            format!("ball_frac = {:?}", self.ball_frac),
            format!("ell = {}", self.ell),
            format!("q_max = {}", self.q_max),
            format!("pairs = {}", self.pairs),
            format!("hop_cap = {}", self.hop_cap.map_or("auto".into(), |h| h.to_string())),
            format!("expansion_eps = {:?}", self.expansion_eps),
            format!("expansion_c = {:?}", self.expansion_c),
        ]);
        lines.join("\n") + "\n"
    }

    /// Hex SHA-256 of [`SweepConfig::canonical`].
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path)
    }

    /// Parses `key = value` lines; `#` starts a comment. Lists are comma separated.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut cfg = SweepConfig::new(Experiment::Mix, Vec::new(), Vec::new(), Seeds::List(Vec::new()));
        let mut experiment = None;
        let mut seed_list = None;
        let mut seed_count = None;
        let mut seed_base = 0u64;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(line_no, format!("expected `key = value`, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |e: String| err(line_no, format!("{key}: {e}"));
            fn one<T: FromStr>(v: &str) -> std::result::Result<T, String>
            where
                T::Err: fmt::Display,
            {
                v.parse::<T>().map_err(|e| format!("cannot parse {v:?}: {e}"))
            }
            fn list<T: FromStr>(v: &str) -> std::result::Result<Vec<T>, String>
            where
                T::Err: fmt::Display,
            {
                v.split(',').map(|s| one(s.trim())).collect()
            }
            match key {
                "experiment" => experiment = Some(one::<Experiment>(value).map_err(bad)?),
                "n" | "n_values" => cfg.n_values = list(value).map_err(bad)?,
                "r" | "r_values" => cfg.r_values = list(value).map_err(bad)?,
                "seeds" => seed_list = Some(list(value).map_err(bad)?),
                "seed_count" => seed_count = Some(one(value).map_err(bad)?),
                "seed_base" => seed_base = one(value).map_err(bad)?,
                "output" | "out" => cfg.output = Some(PathBuf::from(value)),
                "format" => cfg.format = Some(one(value).map_err(bad)?),
                "starts" => cfg.starts = one(value).map_err(bad)?,
                "threads" => cfg.threads = Some(one(value).map_err(bad)?),
                "epsilon" => cfg.epsilon = one(value).map_err(bad)?,
                "random_starts" => cfg.random_starts = one(value).map_err(bad)?,
                "ball_frac" => cfg.ball_frac = one(value).map_err(bad)?,
                "ell" => cfg.ell = one(value).map_err(bad)?,
                "q_max" => cfg.q_max = one(value).map_err(bad)?,
                "pairs" => cfg.pairs = one(value).map_err(bad)?,
                "hop_cap" => cfg.hop_cap = if value == "auto" { None } else { Some(one(value).map_err(bad)?) },
                "expansion_eps" => cfg.expansion_eps = one(value).map_err(bad)?,
                "expansion_c" => cfg.expansion_c = one(value).map_err(bad)?,
                _ => return Err(err(line_no, format!("unknown key {key:?}"))),
            }
        }
        cfg.experiment = experiment.ok_or_else(|| err(0, "missing `experiment`".into()))?;
        cfg.seeds = match (seed_list, seed_count) {
            (Some(_), Some(_)) => return Err(err(0, "give either `seeds` or `seed_count`, not both".into())),
            (Some(list), None) => Seeds::List(list),
            (None, Some(count)) => Seeds::Derived { count, base: seed_base },
            (None, None) => return Err(err(0, "missing `seeds` or `seed_count`".into())),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
