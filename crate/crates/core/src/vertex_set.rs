//! Fixed-capacity bitset over canonical vertex indices.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
    capacity: usize,
    len: usize,
}

impl VertexSet {
    pub fn new(capacity: usize) -> Self {
        Self {
            words: vec![0; capacity.div_ceil(64)],
            capacity,
            len: 0,
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::new(capacity);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            let hi = (lo + 64).min(capacity);
            *w = if hi - lo == 64 { u64::MAX } else { (1u64 << (hi - lo)) - 1 };
        }
        s.len = capacity;
        s
    }

    pub fn from_indices(capacity: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(capacity);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Builds a set from the low `capacity` bits of `mask` (capacity ≤ 64).
    pub fn from_mask(capacity: usize, mask: u64) -> Self {
        assert!(capacity <= 64, "mask sets hold at most 64 vertices");
        let mut s = Self::new(capacity);
        let mask = if capacity == 64 { mask } else { mask & ((1u64 << capacity) - 1) };
        if capacity > 0 {
            s.words[0] = mask;
        }
        s.len = mask.count_ones() as usize;
        s
    }

    #[inline]
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.capacity && self.words[v >> 6] >> (v & 63) & 1 == 1
    }

    /// Returns `true` if `v` was not already present.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.capacity, "vertex {v} out of range {}", self.capacity);
        let w = &mut self.words[v >> 6];
        let bit = 1u64 << (v & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        self.len += fresh as usize;
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.capacity {
            return false;
        }
        let w = &mut self.words[v >> 6];
        let bit = 1u64 << (v & 63);
        let present = *w & bit != 0;
        *w &= !bit;
        self.len -= present as usize;
        present
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let t = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(i * 64 + t)
                }
            })
        })
    }

    pub fn complement(&self) -> Self {
        let full = Self::full(self.capacity);
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&full.words)
            .map(|(a, f)| !a & f)
            .collect();
        Self {
            words,
            capacity: self.capacity,
            len: self.capacity - self.len,
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.capacity == other.capacity
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &Self) {
        assert_eq!(self.capacity, other.capacity);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.len = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
