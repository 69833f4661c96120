//! ℓ-partitions of the torus into near-square boxes, box-like sets and box-cores.

use super::Torus;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// Axis-aligned rectangle in offset coordinates `i = x + n`, `j = y + n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoxRect {
    pub i0: usize,
    pub j0: usize,
    pub width: usize,
    pub height: usize,
}

impl BoxRect {
    pub fn size(&self) -> usize {
        self.width * self.height
    }

    pub fn vertices(&self, torus: &Torus) -> impl Iterator<Item = usize> + '_ {
        let m = torus.side();
        (self.i0..self.i0 + self.width)
            .flat_map(move |i| (self.j0..self.j0 + self.height).map(move |j| i * m + j))
    }
}

/// A partition of the torus into boxes whose sides lie in `[ℓ, 2ℓ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPartition {
    torus: Torus,
    ell: usize,
    boxes: Vec<BoxRect>,
    box_of: Vec<u32>,
}

/// Splits `[0, side)` into `⌊side/ℓ⌋` runs of length `ℓ`, the last run absorbing the remainder.
fn split_axis(side: usize, ell: usize) -> Vec<(usize, usize)> {
    let k = side / ell;
    (0..k)
        .map(|b| {
            let start = b * ell;
            let len = if b + 1 == k { side - start } else { ell };
            (start, len)
        })
        .collect()
}

impl LPartition {
    /// Tiles the grid with `ℓ × ℓ` squares from the `(-n, -n)` corner, widening the
    /// last column and row of boxes to reach the far boundaries. The far corner box
    /// is then at most `2ℓ` on each side.
    pub fn new(torus: Torus, ell: usize) -> Result<Self> {
        if ell == 0 || ell > torus.n() as usize {
            return Err(Error::domain(format!(
                "box side ℓ = {ell} must satisfy 1 ≤ ℓ ≤ n = {}",
                torus.n()
            )));
        }
        let runs = split_axis(torus.side(), ell);
        let mut boxes = Vec::with_capacity(runs.len() * runs.len());
        for &(i0, width) in &runs {
            for &(j0, height) in &runs {
                boxes.push(BoxRect { i0, j0, width, height });
            }
        }
        let mut box_of = vec![0u32; torus.vertex_count()];
        for (b, rect) in boxes.iter().enumerate() {
            for v in rect.vertices(&torus) {
                box_of[v] = b as u32;
            }
        }
        Ok(Self { torus, ell, boxes, box_of })
    }

    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn boxes(&self) -> &[BoxRect] {
        &self.boxes
    }

    /// Number of boxes `Q`.
    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    #[inline]
    pub fn box_of(&self, v: usize) -> usize {
        self.box_of[v] as usize
    }

    pub fn box_set(&self, b: usize) -> VertexSet {
        VertexSet::from_indices(self.torus.vertex_count(), self.boxes[b].vertices(&self.torus))
    }

    /// Per-box counts of `|S ∩ U|`.
    fn occupancy(&self, s: &VertexSet) -> Vec<usize> {
        let mut count = vec![0usize; self.boxes.len()];
        for v in s.iter() {
            count[self.box_of(v)] += 1;
        }
        count
    }

    pub fn is_box_like(&self, s: &VertexSet) -> bool {
        self.occupancy(s)
            .iter()
            .zip(&self.boxes)
            .all(|(&c, b)| c == 0 || c == b.size())
    }

    /// The largest box-like subset of `s`: the union of boxes entirely inside `s`.
    pub fn box_core(&self, s: &VertexSet) -> VertexSet {
        let occ = self.occupancy(s);
        let mut core = VertexSet::new(self.torus.vertex_count());
        for (b, rect) in self.boxes.iter().enumerate() {
            if occ[b] == rect.size() {
                for v in rect.vertices(&self.torus) {
                    core.insert(v);
                }
            }
        }
        core
    }

    /// The smallest box-like superset of `s`: every box touched by `s`, filled up.
    pub fn box_hull(&self, s: &VertexSet) -> VertexSet {
        let occ = self.occupancy(s);
        let mut hull = VertexSet::new(self.torus.vertex_count());
        for (b, rect) in self.boxes.iter().enumerate() {
            if occ[b] > 0 {
                for v in rect.vertices(&self.torus) {
                    hull.insert(v);
                }
            }
        }
        hull
    }

    /// Either the box-core keeps a `1 − η` fraction of `s`, or `s` has torus
    /// boundary at least `η|S|/(4ℓ²)`. Holds for every nonempty set.
    pub fn dichotomy_holds(&self, s: &VertexSet, eta: f64) -> Result<bool> {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::domain(format!("η = {eta} must lie in (0, 1)")));
        }
        if s.is_empty() {
            return Err(Error::Precondition("dichotomy check needs a nonempty set".into()));
        }
        let size = s.len() as f64;
        let core = self.box_core(s).len() as f64;
        if core >= (1.0 - eta) * size {
            return Ok(true);
        }
        let boundary = self.torus.edge_boundary_size(s) as f64;
        Ok(boundary >= eta * size / (4.0 * (self.ell * self.ell) as f64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_invariants(p: &LPartition) {
        let t = p.torus();
        let nv = t.vertex_count();
        let ell = p.ell();
        let mut cover = vec![0u32; nv];
        for b in p.boxes() {
            assert!((ell..=2 * ell).contains(&b.width), "{b:?}");
            assert!((ell..=2 * ell).contains(&b.height), "{b:?}");
            for v in b.vertices(t) {
                cover[v] += 1;
            }
        }
        assert!(cover.iter().all(|&c| c == 1));
        let q = p.len() as f64;
        let l2 = (ell * ell) as f64;
        assert!(nv as f64 / (4.0 * l2) <= q && q <= nv as f64 / l2);
    }

    #[test]
    fn exact_division() {
        let p = LPartition::new(Torus::new(4).unwrap(), 3).unwrap();
        assert_eq!(p.len(), 9);
        assert!(p.boxes().iter().all(|b| b.width == 3 && b.height == 3));
    }

    #[test]
    fn remainder_absorbed() {
        let p = LPartition::new(Torus::new(3).unwrap(), 3).unwrap();
        assert_eq!(p.len(), 4);
        for b in p.boxes() {
            assert!([3, 4].contains(&b.width) && [3, 4].contains(&b.height));
        }
        check_invariants(&p);
    }

    #[test]
    fn smallest_instance() {
        let p = LPartition::new(Torus::new(1).unwrap(), 1).unwrap();
        check_invariants(&p);
        assert!(p.boxes().iter().all(|b| b.width <= 2 && b.height <= 2));
    }

    #[test]
    fn rejects_bad_ell() {
        let t = Torus::new(3).unwrap();
        assert!(LPartition::new(t, 0).is_err());
        assert!(LPartition::new(t, 4).is_err());
    }

    #[test]
    fn invariants_for_all_small_parameters() {
        for n in 1..=40u32 {
            for ell in 1..=n as usize {
                check_invariants(&LPartition::new(Torus::new(n).unwrap(), ell).unwrap());
            }
        }
    }

    #[test]
    fn box_core_examples() {
        let t = Torus::new(4).unwrap();
        let p = LPartition::new(t, 3).unwrap();
        let u = p.box_set(4);
        assert_eq!(p.box_core(&u), u);
        let mut minus = u.clone();
        minus.remove(u.iter().next().unwrap());
        assert!(p.box_core(&minus).is_empty());
        let all = VertexSet::full(t.vertex_count());
        assert_eq!(p.box_core(&all), all);
    }

    #[test]
    fn box_core_properties_on_random_sets() {
        let t = Torus::new(7).unwrap();
        let p = LPartition::new(t, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let density: f64 = rng.random();
            let mut s = VertexSet::new(t.vertex_count());
            for b in 0..p.len() {
                if rng.random_bool(density) {
                    s.union_with(&p.box_set(b));
                }
            }
            for v in 0..t.vertex_count() {
                if rng.random_bool(0.05) {
                    if s.contains(v) {
                        s.remove(v);
                    } else {
                        s.insert(v);
                    }
                }
            }
            let core = p.box_core(&s);
            assert!(core.is_subset(&s));
            assert!(p.is_box_like(&core));
            assert_eq!(p.box_core(&core), core);
            let hull = p.box_hull(&s);
            assert!(s.is_subset(&hull) && p.is_box_like(&hull));
            if !s.is_empty() {
                assert!(p.dichotomy_holds(&s, rng.random_range(0.01..0.99)).unwrap());
            }
        }
    }

    #[test]
    fn dichotomy_branches_and_errors() {
        let t = Torus::new(4).unwrap();
        let p = LPartition::new(t, 2).unwrap();
        let u = p.box_set(0);
        assert!(p.dichotomy_holds(&u, 0.3).unwrap());
        let single = VertexSet::from_indices(t.vertex_count(), [5]);
        assert!(p.box_core(&single).is_empty());
        assert!(p.dichotomy_holds(&single, 0.5).unwrap());
        assert!(p.dichotomy_holds(&u, 0.0).is_err());
        assert!(p.dichotomy_holds(&u, 1.0).is_err());
        assert!(p.dichotomy_holds(&VertexSet::new(t.vertex_count()), 0.5).is_err());
    }
}
