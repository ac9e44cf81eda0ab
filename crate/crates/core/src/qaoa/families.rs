//! Enumeration of `O_K(L)`: subfamilies of a term list whose symmetric
//! difference is a target set.
//!
//! Depth-first over the terms, carrying the running XOR. Before descending
//! at position `i` we check that `acc ⊕ K` lies in the GF(2) span of
//! `terms[i..]`; if it does not, no completion exists. The check subsumes
//! the weaker "bits outside the union of the remaining terms" prune, and
//! makes the search output-sensitive: every visited node has at least one
//! solution beneath it.

use crate::error::{LmcError, Result};
use crate::subset::VertexSet;

/// Default bound on `|O(L)|`. The degree-3 ball patch needs 19.
pub const DEFAULT_FAMILY_CAP: usize = 25;

/// Families are bitmasks over term indices, so the cap cannot exceed this.
const MASK_BITS: usize = 32;

/// GF(2) row-echelon basis keyed by pivot (highest set bit).
#[derive(Clone, Default)]
struct Xorbasis {
    rows: Vec<u64>,
}

impl Xorbasis {
    fn reduce(&self, mut v: u64) -> u64 {
        for &r in &self.rows {
            let pivot = 63 - r.leading_zeros();
            if (v >> pivot) & 1 == 1 {
                v ^= r;
            }
        }
        v
    }

    fn insert(&mut self, v: u64) {
        let v = self.reduce(v);
        if v != 0 {
            self.rows.push(v);
            self.rows.sort_unstable_by(|a, b| b.cmp(a));
        }
    }

    fn spans(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }
}

/// Every subfamily of `terms` (as an index bitmask) with XOR equal to `k`.
///
/// Masks are produced in the order "include before exclude" at each depth,
/// which is deterministic for a given term order.
pub fn family_masks(terms: &[VertexSet], k: VertexSet, cap: usize) -> Result<Vec<u32>> {
    let cap = cap.min(MASK_BITS);
    if terms.len() > cap {
        return Err(LmcError::Capacity {
            what: "|O(L)| (family enumeration)",
            got: terms.len(),
            max: cap,
        });
    }
    let m = terms.len();
    let mut suffix = vec![Xorbasis::default(); m + 1];
    for i in (0..m).rev() {
        let mut b = suffix[i + 1].clone();
        b.insert(terms[i].bits());
        suffix[i] = b;
    }
    let mut out = Vec::new();
    let mut stack = vec![(0usize, 0u64, 0u32)];
    let target = k.bits();
    while let Some((i, acc, mask)) = stack.pop() {
        if !suffix[i].spans(acc ^ target) {
            continue;
        }
        if i == m {
            out.push(mask);
            continue;
        }
        // exclude pushed first so include is explored first
        stack.push((i + 1, acc, mask));
        stack.push((i + 1, acc ^ terms[i].bits(), mask | (1 << i)));
    }
    Ok(out)
}

pub(crate) fn mask_members(terms: &[VertexSet], mask: u32) -> Vec<VertexSet> {
    terms
        .iter()
        .enumerate()
        .filter(|(i, _)| (mask >> i) & 1 == 1)
        .map(|(_, t)| *t)
        .collect()
}

/// `O_K(L)` as explicit families, with the default cap.
pub fn solution_families(terms: &[VertexSet], k: VertexSet) -> Result<Vec<Vec<VertexSet>>> {
    solution_families_capped(terms, k, DEFAULT_FAMILY_CAP)
}

pub fn solution_families_capped(
    terms: &[VertexSet],
    k: VertexSet,
    cap: usize,
) -> Result<Vec<Vec<VertexSet>>> {
    Ok(family_masks(terms, k, cap)?
        .into_iter()
        .map(|m| mask_members(terms, m))
        .collect())
}
