//! Experiment records and their CSV / JSON serialisation.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{Experiment, Format};
use crate::error::{Error, Result};

/// Version tag stamped on every record.
pub const VERSION: &str = concat!("smallworld-", env!("CARGO_PKG_VERSION"));

/// A value that fits in one CSV cell. Reals use 17 significant digits so they
/// parse back bit-identically; missing optional values are empty cells.
trait Cell: Sized {
    fn to_cell(&self) -> String;
    fn from_cell(s: &str) -> std::result::Result<Self, String>;
}

macro_rules! parsed_cell {
    ($($t:ty),*) => {$(
        impl Cell for $t {
            fn to_cell(&self) -> String {
                self.to_string()
            }
            fn from_cell(s: &str) -> std::result::Result<Self, String> {
                s.parse().map_err(|e| format!("cannot parse {s:?}: {e}"))
            }
        }
    )*};
}

parsed_cell!(u32, u64, usize, bool, String);

impl Cell for f64 {
    fn to_cell(&self) -> String {
        format!("{self:.16e}")
    }
    fn from_cell(s: &str) -> std::result::Result<Self, String> {
        s.parse().map_err(|e| format!("cannot parse {s:?}: {e}"))
    }
}

impl Cell for Experiment {
    fn to_cell(&self) -> String {
        self.as_str().to_owned()
    }
    fn from_cell(s: &str) -> std::result::Result<Self, String> {
        s.parse().map_err(|e: Error| e.to_string())
    }
}

impl<T: Cell> Cell for Option<T> {
    fn to_cell(&self) -> String {
        self.as_ref().map_or_else(String::new, Cell::to_cell)
    }
    fn from_cell(s: &str) -> std::result::Result<Self, String> {
        if s.is_empty() {
            Ok(None)
        } else {
            T::from_cell(s).map(Some)
        }
    }
}

macro_rules! record {
    ($($(#[$doc:meta])* $field:ident: $ty:ty,)*) => {
        /// One `(n, r, seed)` measurement. Fields an experiment does not
        /// produce are `None`.
        #[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
        pub struct ExperimentRecord {
            $($(#[$doc])* pub $field: $ty,)*
        }

        impl ExperimentRecord {
            /// Column order of the CSV output and key order of the JSON output.
            pub const COLUMNS: &'static [&'static str] = &[$(stringify!($field)),*];

            fn cells(&self) -> Vec<String> {
                vec![$(Cell::to_cell(&self.$field)),*]
            }

            fn from_cells(cells: &[&str]) -> std::result::Result<Self, String> {
                let mut it = cells.iter();
                Ok(Self {$(
                    $field: <$ty as Cell>::from_cell(it.next().ok_or("too few columns")?)
                        .map_err(|e| format!("{}: {e}", stringify!($field)))?,
                )*})
            }
        }
    };
}

record! {
    experiment: Experiment,
    version: String,
    n: u32,
    r: f64,
    seed: u64,
    replicate: u32,
    vertex_count: usize,
    edge_count: usize,
    long_range_edges: usize,
    z: f64,
    t_mix: Option<u64>,
    /// `false` when `t_mix` is a heuristic-start lower estimate.
    t_mix_exact: Option<bool>,
    mix_starts: Option<usize>,
    epsilon: Option<f64>,
    diameter: Option<u32>,
    diameter_exact: Option<bool>,
    gap: Option<f64>,
    relax_lower: Option<f64>,
    relax_upper: Option<f64>,
    ball_radius: Option<u32>,
    ball_size: Option<usize>,
    ball_edge_boundary: Option<usize>,
    ball_torus_boundary: Option<usize>,
    ball_vertex_boundary: Option<usize>,
    phi_ball: Option<f64>,
    phi_sweep_min: Option<f64>,
    sweep_size: Option<usize>,
    ell: Option<usize>,
    q: Option<usize>,
    w_q: Option<u64>,
    /// Mean of `w_q` over all seeds of the same `(n, r, ℓ, q)`.
    w_q_mean: Option<f64>,
    w_q_bound: Option<f64>,
    routing_pairs: Option<usize>,
    routing_delivered: Option<usize>,
    routing_hops_median: Option<f64>,
    routing_hops_mean: Option<f64>,
    routing_hops_max: Option<usize>,
    routing_distance_mean: Option<f64>,
    expansion_eps: Option<f64>,
    expansion_c: Option<f64>,
    expansion_holds: Option<bool>,
    expansion_witness_size: Option<usize>,
}

impl ExperimentRecord {
    /// A record with only the instance columns filled in.
    pub fn base(experiment: Experiment, g: &crate::graph::SmallWorldGraph, replicate: u32) -> Self {
        let p = g.params();
        Self {
            experiment,
            version: VERSION.to_owned(),
            n: p.n,
            r: p.r,
            seed: p.seed,
            replicate,
            vertex_count: g.vertex_count(),
            edge_count: g.edge_count(),
            long_range_edges: g.long_range_edges().len(),
            z: g.z(),
            ..Default::default()
        }
    }

    /// Canonical output order: `(n, r, seed)`, then `q`.
    pub fn sort_canonical(records: &mut [ExperimentRecord]) {
        records.sort_by(|a, b| {
            a.n.cmp(&b.n)
                .then(a.r.total_cmp(&b.r))
                .then(a.seed.cmp(&b.seed))
                .then(a.replicate.cmp(&b.replicate))
                .then(a.q.cmp(&b.q))
        });
    }
}

/// Provenance written after the records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub experiment: Experiment,
    /// Hex SHA-256 of the canonical configuration text.
    pub config_hash: String,
    /// `None` when seeds were listed explicitly.
    pub seed_base: Option<u64>,
    pub records: usize,
}

const MANIFEST_PREFIX: &str = "# manifest";

impl Manifest {
    fn csv_line(&self) -> String {
        format!(
            "{MANIFEST_PREFIX} version={} experiment={} config_hash={} seed_base={} records={}",
            self.version,
            self.experiment,
            self.config_hash,
            self.seed_base.map_or("none".into(), |b| b.to_string()),
            self.records
        )
    }

    fn from_csv_line(line: &str) -> std::result::Result<Self, String> {
        let rest = line.strip_prefix(MANIFEST_PREFIX).ok_or("not a manifest line")?;
        let mut m = Manifest {
            version: String::new(),
            experiment: Experiment::Mix,
            config_hash: String::new(),
            seed_base: None,
            records: 0,
        };
        for kv in rest.split_whitespace() {
            let (k, v) = kv.split_once('=').ok_or_else(|| format!("bad manifest entry {kv:?}"))?;
            match k {
                "version" => m.version = v.to_owned(),
                "experiment" => m.experiment = Experiment::from_cell(v)?,
                "config_hash" => m.config_hash = v.to_owned(),
                "seed_base" => m.seed_base = if v == "none" { None } else { Some(u64::from_cell(v)?) },
                "records" => m.records = usize::from_cell(v)?,
                _ => return Err(format!("unknown manifest key {k:?}")),
            }
        }
        Ok(m)
    }
}

/// Writes `records` followed by the manifest. Refuses an empty record list
/// without touching the file system.
pub fn emit(records: &[ExperimentRecord], format: Format, path: impl AsRef<Path>, manifest: &Manifest) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Precondition("no records to emit".into()));
    }
    let mut out = BufWriter::new(File::create(path.as_ref())?);
    write_records(records, format, &mut out, manifest)?;
    out.flush()?;
    Ok(())
}

/// [`emit`] to an arbitrary writer.
pub fn write_records<W: Write>(records: &[ExperimentRecord], format: Format, mut out: W, manifest: &Manifest) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Precondition("no records to emit".into()));
    }
    match format {
        Format::Csv => {
            {
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(ExperimentRecord::COLUMNS).map_err(csv_error)?;
                for rec in records {
                    w.write_record(rec.cells()).map_err(csv_error)?;
                }
                w.flush()?;
            }
            writeln!(out, "{}", manifest.csv_line())?;
        }
        Format::Json => {
            let mut items: Vec<serde_json::Value> = records
                .iter()
                .map(serde_json::to_value)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Serialize(e.to_string()))?;
            items.push(serde_json::json!({ "manifest": manifest }));
            serde_json::to_writer_pretty(&mut out, &items).map_err(|e| Error::Serialize(e.to_string()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Serialize(format!("{other:?}")),
    }
}

/// Reads back a file written by [`emit`].
pub fn read_records(path: impl AsRef<Path>, format: Format) -> Result<(Vec<ExperimentRecord>, Manifest)> {
    let path = path.as_ref();
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    match format {
        Format::Csv => {
            let reader = BufReader::new(File::open(path)?);
            let mut lines: Vec<String> = reader.lines().collect::<std::io::Result<_>>()?;
            let last = lines.pop().ok_or_else(|| parse_err(1, "empty file".into()))?;
            let manifest = Manifest::from_csv_line(&last).map_err(|e| parse_err(lines.len() + 1, e))?;
            let body = lines.join("\n");
            let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
            let header = r.headers().map_err(|e| parse_err(1, e.to_string()))?;
            if header.iter().ne(ExperimentRecord::COLUMNS.iter().copied()) {
                return Err(parse_err(1, "unexpected header".into()));
            }
            let mut records = Vec::new();
            for (i, row) in r.records().enumerate() {
                let row = row.map_err(|e| parse_err(i + 2, e.to_string()))?;
                let cells: Vec<&str> = row.iter().collect();
                records.push(ExperimentRecord::from_cells(&cells).map_err(|e| parse_err(i + 2, e))?);
            }
            Ok((records, manifest))
        }
        Format::Json => {
            let mut items: Vec<serde_json::Value> =
                serde_json::from_reader(BufReader::new(File::open(path)?)).map_err(|e| parse_err(e.line(), e.to_string()))?;
            let tail = items.pop().ok_or_else(|| parse_err(1, "empty array".into()))?;
            let manifest = tail
                .get("manifest")
                .cloned()
                .ok_or_else(|| parse_err(0, "missing trailing manifest".into()))
                .and_then(|m| serde_json::from_value(m).map_err(|e| parse_err(0, e.to_string())))?;
            let records = items
                .into_iter()
                .map(serde_json::from_value)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| parse_err(0, e.to_string()))?;
            Ok((records, manifest))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{sample_graph, ModelParams};

    fn sample_records() -> Vec<ExperimentRecord> {
        (0..3u64)
            .map(|s| {
                let g = sample_graph(ModelParams::new(4, 1.0 / 3.0, s).unwrap()).unwrap();
                let mut rec = ExperimentRecord::base(Experiment::Mix, &g, s as u32);
                rec.t_mix = Some(17 + s);
                rec.t_mix_exact = Some(true);
                rec.gap = Some(0.1 + 1e-17 * s as f64 + std::f64::consts::PI * 1e-3);
                rec.phi_ball = Some(f64::MIN_POSITIVE);
                rec
            })
            .collect()
    }

    fn manifest() -> Manifest {
        Manifest {
            version: VERSION.into(),
            experiment: Experiment::Mix,
            config_hash: "ab".repeat(32),
            seed_base: Some(9),
            records: 3,
        }
    }

    #[test]
    fn csv_and_json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let recs = sample_records();
        for format in [Format::Csv, Format::Json] {
            let path = dir.path().join(format!("out.{format}"));
            emit(&recs, format, &path, &manifest()).unwrap();
            let (back, m) = read_records(&path, format).unwrap();
            assert_eq!(back, recs);
            assert_eq!(m, manifest());
        }
    }

    #[test]
    fn csv_reals_have_seventeen_digits() {
        assert_eq!(0.1f64.to_cell(), "1.0000000000000001e-1");
        assert_eq!(f64::from_cell(&(1.0f64 / 3.0).to_cell()).unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn empty_records_create_no_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nothing.csv");
        assert!(matches!(emit(&[], Format::Csv, &path, &manifest()), Err(Error::Precondition(_))));
        assert!(!path.exists());
    }

    #[test]
    fn canonical_sort() {
        let mut recs = sample_records();
        recs.reverse();
        recs[0].n = 2;
        ExperimentRecord::sort_canonical(&mut recs);
        assert_eq!((recs[0].n, recs[0].seed), (2, 2));
        assert_eq!(recs[1].seed, 0);
        assert!(recs.windows(2).all(|w| (w[0].n, w[0].seed) <= (w[1].n, w[1].seed)));
    }
}
