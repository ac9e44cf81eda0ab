//! Vertex subsets as 64-bit masks.
//!
//! Every Pauli-Z term `Z_S` of a diagonal Hamiltonian is keyed by its support
//! `S`. Symmetric difference is XOR and the parity character
//! `χ_S(x) = (-1)^{|S ∩ x|}` is a popcount, which is what the expectation
//! engine's inner loops need.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest vertex count a [`VertexSet`] can address.
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// Panics if a vertex is `>= 64`.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(vertices: I) -> Self {
        let mut bits = 0u64;
        for v in vertices {
            assert!(v < MAX_VERTICES, "vertex {v} does not fit in a 64-bit subset");
            bits |= 1 << v;
        }
        VertexSet(bits)
    }

    pub fn singleton(v: usize) -> Self {
        Self::from_vertices([v])
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && (self.0 >> v) & 1 == 1
    }

    pub const fn sym_diff(self, other: Self) -> Self {
        VertexSet(self.0 ^ other.0)
    }

    pub const fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub const fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub const fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// True when `|self ∩ other|` is odd.
    pub const fn odd_overlap(self, other: Self) -> bool {
        (self.0 & other.0).count_ones() & 1 == 1
    }

    /// `χ_S(x)` for a basis state whose bit `i` is `x_i`.
    pub const fn parity_sign(self, x: u64) -> f64 {
        if (self.0 & x).count_ones() & 1 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    /// Largest vertex index plus one, or 0 for the empty set.
    pub const fn span(self) -> usize {
        (64 - self.0.leading_zeros()) as usize
    }

    /// Vertices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self`, starting from the empty set, in increasing
    /// order of their bit pattern.
    pub fn subsets(self) -> impl Iterator<Item = VertexSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(VertexSet(cur))
        })
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_vertices(iter)
    }
}

// Serialized as a sorted vertex array.
impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let vertices = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&v) = vertices.iter().find(|&&v| v >= MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!(
                "vertex {v} does not fit in a 64-bit subset"
            )));
        }
        Ok(Self::from_vertices(vertices))
    }
}
