//! Geometry of the periodic `(2n+1) × (2n+1)` grid.
//!
//! Vertices are the lattice points `{-n, …, n}²`. Every set and vector in the
//! crate is indexed canonically by `(x + n)·(2n + 1) + (y + n)`.

mod partition;

pub use partition::{BoxRect, LPartition};

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// An edge oriented from the inside of a set to its outside.
pub type Edge = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusCoord {
    pub x: i32,
    pub y: i32,
}

impl TorusCoord {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Torus {
    n: u32,
}

impl Torus {
    /// Largest supported half-side; keeps `N` comfortably inside `u32`.
    pub const MAX_N: u32 = 20_000;

    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > Self::MAX_N {
            return Err(Error::domain(format!("torus half-side must be in [1, {}], got {n}", Self::MAX_N)));
        }
        Ok(Self { n })
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Side length `2n + 1`.
    #[inline]
    pub fn side(&self) -> usize {
        2 * self.n as usize + 1
    }

    /// `N = (2n+1)²`.
    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.side() * self.side()
    }

    pub fn contains(&self, c: TorusCoord) -> bool {
        let n = self.n as i32;
        (-n..=n).contains(&c.x) && (-n..=n).contains(&c.y)
    }

    fn check(&self, c: TorusCoord) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::domain(format!("{c:?} outside torus with n = {}", self.n)))
        }
    }

    pub fn index(&self, c: TorusCoord) -> Result<usize> {
        self.check(c)?;
        Ok(self.index_unchecked(c))
    }

    #[inline]
    pub(crate) fn index_unchecked(&self, c: TorusCoord) -> usize {
        let n = self.n as i32;
        ((c.x + n) as usize) * self.side() + (c.y + n) as usize
    }

    #[inline]
    pub fn coord(&self, idx: usize) -> TorusCoord {
        debug_assert!(idx < self.vertex_count());
        let m = self.side();
        let n = self.n as i32;
        TorusCoord::new((idx / m) as i32 - n, (idx % m) as i32 - n)
    }

    /// Wraps an arbitrary integer point back into `[-n, n]²`.
    #[inline]
    pub fn wrap(&self, x: i64, y: i64) -> TorusCoord {
        let m = self.side() as i64;
        let n = self.n as i64;
        TorusCoord::new(
            ((x + n).rem_euclid(m) - n) as i32,
            ((y + n).rem_euclid(m) - n) as i32,
        )
    }

    #[inline]
    fn axis_distance(&self, a: i32, b: i32) -> u32 {
        let d = (a - b).unsigned_abs();
        d.min(self.side() as u32 - d)
    }

    /// Shortest-path length in the torus: L1 distance with wraparound on each axis.
    pub fn distance(&self, u: TorusCoord, v: TorusCoord) -> Result<u32> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.distance_unchecked(u, v))
    }

    #[inline]
    pub(crate) fn distance_unchecked(&self, u: TorusCoord, v: TorusCoord) -> u32 {
        self.axis_distance(u.x, v.x) + self.axis_distance(u.y, v.y)
    }

    #[inline]
    pub fn index_distance(&self, a: usize, b: usize) -> u32 {
        self.distance_unchecked(self.coord(a), self.coord(b))
    }

    /// Number of vertices at distance exactly `ell` from any fixed vertex:
    /// `4·min(ℓ, 2n+1−ℓ)`.
    pub fn ring_size(&self, ell: u32) -> Result<usize> {
        self.check_ring(ell)?;
        Ok(self.ring_size_unchecked(ell))
    }

    #[inline]
    pub(crate) fn ring_size_unchecked(&self, ell: u32) -> usize {
        4 * ell.min(self.side() as u32 - ell) as usize
    }

    fn check_ring(&self, ell: u32) -> Result<()> {
        if ell == 0 || ell > 2 * self.n {
            Err(Error::domain(format!("ring radius {ell} outside [1, {}]", 2 * self.n)))
        } else {
            Ok(())
        }
    }

    /// Displacements `(dx, dy) ∈ [-n, n]²` with `|dx| + |dy| = ell`.
    ///
    /// Adding these to any vertex and wrapping enumerates its ring without
    /// repetition, since distinct `dx ∈ [-n, n]` are distinct residues mod `2n+1`.
    pub fn ring_offsets(&self, ell: u32) -> Result<Vec<(i32, i32)>> {
        self.check_ring(ell)?;
        let n = self.n as i32;
        let ell = ell as i32;
        let mut out = Vec::with_capacity(self.ring_size_unchecked(ell as u32));
        for dx in -n..=n {
            let rest = ell - dx.abs();
            if rest < 0 || rest > n {
                continue;
            }
            if rest == 0 {
                out.push((dx, 0));
            } else {
                out.push((dx, -rest));
                out.push((dx, rest));
            }
        }
        Ok(out)
    }

    /// All vertices at torus distance exactly `ell` from `v`.
    pub fn ring(&self, v: TorusCoord, ell: u32) -> Result<Vec<TorusCoord>> {
        self.check(v)?;
        Ok(self
            .ring_offsets(ell)?
            .into_iter()
            .map(|(dx, dy)| self.wrap(v.x as i64 + dx as i64, v.y as i64 + dy as i64))
            .collect())
    }

    /// The four torus neighbours of a canonical index (right, left, up, down in `x`/`y`).
    #[inline]
    pub fn neighbours(&self, idx: usize) -> [usize; 4] {
        let m = self.side();
        let (i, j) = (idx / m, idx % m);
        let ip = if i + 1 == m { 0 } else { i + 1 };
        let im = if i == 0 { m - 1 } else { i - 1 };
        let jp = if j + 1 == m { 0 } else { j + 1 };
        let jm = if j == 0 { m - 1 } else { j - 1 };
        [ip * m + j, im * m + j, i * m + jp, i * m + jm]
    }

    /// Every torus edge once, as `(u, v)` with `v` the `+x` or `+y` neighbour of `u`.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            let nb = self.neighbours(u);
            [(u, nb[0]), (u, nb[2])]
        })
    }

    /// Torus edges with exactly one endpoint in `s`, oriented `(inside, outside)`.
    pub fn edge_boundary(&self, s: &VertexSet) -> Vec<Edge> {
        debug_assert_eq!(s.capacity(), self.vertex_count());
        let mut out = Vec::new();
        for u in s.iter() {
            for w in self.neighbours(u) {
                if !s.contains(w) {
                    out.push((u, w));
                }
            }
        }
        out
    }

    /// `|∂*S|` without materialising the edges.
    pub fn edge_boundary_size(&self, s: &VertexSet) -> usize {
        s.iter()
            .map(|u| self.neighbours(u).iter().filter(|&&w| !s.contains(w)).count())
            .sum()
    }
}
