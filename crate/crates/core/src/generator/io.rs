//! Text graph format.
//!
//! ```text
//! swg <n> <r> <seed> <Z> <edge_count>
//! <u> <v>          one line per long-range edge, canonical indices
//! ```
//!
//! Torus edges are implicit. UTF-8, LF line endings.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{compute_z, ModelParams};
use crate::error::{Error, Result};
use crate::graph::SmallWorldGraph;
use crate::torus::Torus;

const MAGIC: &str = "swg";

pub fn save_graph(g: &SmallWorldGraph, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path.as_ref())?);
    let p = g.params();
    writeln!(w, "{MAGIC} {} {} {} {} {}", p.n, p.r, p.seed, g.z(), g.edge_count())?;
    for &(u, v) in g.long_range_edges() {
        writeln!(w, "{u} {v}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<SmallWorldGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 6 || fields[0] != MAGIC {
        return Err(err(1, format!("expected `{MAGIC} n r seed Z edge_count`, got `{header}`")));
    }
    let n: u32 = fields[1].parse().map_err(|e| err(1, format!("n: {e}")))?;
    let r: f64 = fields[2].parse().map_err(|e| err(1, format!("r: {e}")))?;
    let seed: u64 = fields[3].parse().map_err(|e| err(1, format!("seed: {e}")))?;
    let z: f64 = fields[4].parse().map_err(|e| err(1, format!("Z: {e}")))?;
    let edge_count: usize = fields[5].parse().map_err(|e| err(1, format!("edge_count: {e}")))?;
    let params = ModelParams::new(n, r, seed).map_err(|e| err(1, e.to_string()))?;

    let expected_z = compute_z(n, r)?.value;
    if ((z - expected_z) / expected_z).abs() > 1e-9 {
        return Err(err(1, format!("Z = {z} inconsistent with n = {n}, r = {r} (expected {expected_z})")));
    }

    let torus = Torus::new(n).map_err(|e| err(1, e.to_string()))?;
    let nv = torus.vertex_count() as u64;
    let mut seen = std::collections::HashMap::new();
    let mut long_range = Vec::new();
    for (no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(err(no, format!("expected `u v`, got `{line}`")));
        };
        let u: u32 = a.parse().map_err(|e| err(no, format!("u: {e}")))?;
        let v: u32 = b.parse().map_err(|e| err(no, format!("v: {e}")))?;
        if u as u64 >= nv || v as u64 >= nv {
            return Err(err(no, format!("vertex out of range [0, {nv})")));
        }
        if torus.index_distance(u as usize, v as usize) < 2 {
            return Err(err(no, format!("edge ({u}, {v}) joins vertices at torus distance < 2")));
        }
        let key = (u.min(v), u.max(v));
        if let Some(first) = seen.insert(key, no) {
            return Err(err(no, format!("duplicate edge {key:?} (first on line {first})")));
        }
        long_range.push(key);
    }
    if edge_count != 2 * nv as usize + long_range.len() {
        return Err(err(
            1,
            format!(
                "edge_count {edge_count} disagrees with 2N + {} long-range lines",
                long_range.len()
            ),
        ));
    }
    SmallWorldGraph::from_long_range(params, z, long_range)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::sample_graph;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.swg");
        let g = sample_graph(ModelParams::new(7, 2.5, 1234).unwrap()).unwrap();
        save_graph(&g, &path).unwrap();
        assert_eq!(load_graph(&path).unwrap(), g);
    }

    #[test]
    fn duplicate_edge_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dup.swg");
        let z = compute_z(2, 1.0).unwrap().value;
        fs::write(&path, format!("swg 2 1 5 {z} 52\n0 12\n12 0\n")).unwrap();
        match load_graph(&path) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("duplicate"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn header_only_is_a_torus() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.swg");
        let z = compute_z(3, 2.0).unwrap().value;
        fs::write(&path, format!("swg 3 2 0 {z} 98\n")).unwrap();
        let g = load_graph(&path).unwrap();
        assert_eq!(g.edge_count(), 98);
        assert!((0..g.vertex_count()).all(|v| g.degree(v) == 4));
    }

    #[test]
    fn malformed_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.swg");
        let z = compute_z(2, 1.0).unwrap().value;
        for (body, line) in [
            (format!("swg 2 1 5 {z} 51\n0 12 3\n"), 2),
            (format!("swg 2 1 5 {z} 51\n0 x\n"), 2),
            (format!("swg 2 1 5 {z} 51\n0 99\n"), 2),
            (format!("swg 2 1 5 {z} 51\n0 1\n"), 2),
            (format!("swg 2 1 5 {z} 52\n0 12\n"), 1),
            ("graph 2 1 5 1 50\n".to_string(), 1),
            ("swg 2 1 5 1.0 50\n".to_string(), 1),
        ] {
            fs::write(&path, body).unwrap();
            match load_graph(&path) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line),
                other => panic!("expected parse error, got {other:?}"),
            }
        }
    }
}
