//! Analytic single-round QAOA expectations for diagonal Hamiltonians.
//!
//! For `|γ,β⟩ = e^{-iβΣX} e^{-iγH} |+⟩^n` and any `K`,
//!
//! ```text
//! ⟨Z_K⟩ = Σ_{L⊆K} ν(L) Σ_{ℱ ∈ O_K(L)} α_ℱ
//! ν(L)  = i^{|L|} sin^{|L|}(2β) cos^{|K|-|L|}(2β)
//! α_ℱ   = Π_{M∈ℱ} i·sin(-2γ W_M) · Π_{N∈O(L)∖ℱ} cos(2γ W_N)
//! ```
//!
//! where `O(L)` holds the terms of `H` meeting `L` in an odd number of
//! vertices and `O_K(L)` the subfamilies of `O(L)` whose symmetric
//! difference is exactly `K`. Complex values are carried through unchanged;
//! the real part is taken once at the end, after checking the imaginary
//! residue vanishes.

mod closed_form;
mod families;
mod patch;

pub use closed_form::{
    closed_form_f2, closed_form_f3, zk_ball_d3, zk_edge_d2, zk_edge_d3, zk_pair_d2,
};
pub use families::{
    family_masks, solution_families, solution_families_capped, DEFAULT_FAMILY_CAP,
};
pub use patch::{tree_patch, PatchKind, TreePatch};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LmcError, Result};
use crate::hamiltonian::DiagonalHamiltonian;
use crate::subset::VertexSet;

/// Imaginary residue above which an expectation is rejected.
pub const REALNESS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QaoaAngles {
    pub gamma: f64,
    pub beta: f64,
}

impl QaoaAngles {
    pub const fn new(gamma: f64, beta: f64) -> Self {
        QaoaAngles { gamma, beta }
    }
}

/// `O(L)`: nonempty nonzero-weight terms with odd overlap with `L`, in
/// ascending bitmask order.
pub fn odd_intersection_terms(h: &DiagonalHamiltonian, l: VertexSet) -> Vec<(VertexSet, f64)> {
    h.support_terms().filter(|(m, _)| m.odd_overlap(l)).collect()
}

/// One family `ℱ ∈ O_K(L)` and its `α_ℱ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub terms: Vec<VertexSet>,
    #[serde(with = "complex_pair")]
    pub alpha: Complex64,
}

/// Contribution of one `L ⊆ K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LRecord {
    pub l: VertexSet,
    #[serde(with = "complex_pair")]
    pub nu: Complex64,
    pub odd_terms: usize,
    pub families: Vec<FamilyRecord>,
    #[serde(with = "complex_pair")]
    pub rho: Complex64,
}

/// Full decomposition of one `⟨Z_K⟩` evaluation. Only `L` with a nonempty
/// `O_K(L)` get a record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZkBreakdown {
    pub k: VertexSet,
    pub angles: QaoaAngles,
    pub records: Vec<LRecord>,
    pub total: f64,
    pub imaginary_residue: f64,
}

fn i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `ν(L)` for `|L| = l_len`, `|K| = k_len`.
pub fn nu(l_len: usize, k_len: usize, beta: f64) -> Complex64 {
    let (s, c) = (2.0 * beta).sin_cos();
    i_pow(l_len) * (s.powi(l_len as i32) * c.powi((k_len - l_len) as i32))
}

struct TermTrig {
    chosen: Complex64,
    skipped: f64,
}

fn term_trig(weights: &[f64], gamma: f64) -> Vec<TermTrig> {
    weights
        .iter()
        .map(|&w| TermTrig {
            chosen: Complex64::new(0.0, (-2.0 * gamma * w).sin()),
            skipped: (2.0 * gamma * w).cos(),
        })
        .collect()
}

fn alpha(trig: &[TermTrig], mask: u32) -> Complex64 {
    trig.iter()
        .enumerate()
        .fold(Complex64::new(1.0, 0.0), |acc, (i, t)| {
            if (mask >> i) & 1 == 1 {
                acc * t.chosen
            } else {
                acc * t.skipped
            }
        })
}

fn evaluate(
    h: &DiagonalHamiltonian,
    k: VertexSet,
    angles: QaoaAngles,
    keep_records: bool,
) -> Result<(f64, Vec<LRecord>, f64)> {
    let mut total = Complex64::new(0.0, 0.0);
    let mut records = Vec::new();
    for l in k.subsets() {
        let odd = odd_intersection_terms(h, l);
        let supports: Vec<VertexSet> = odd.iter().map(|(s, _)| *s).collect();
        let masks = family_masks(&supports, k, DEFAULT_FAMILY_CAP)?;
        if masks.is_empty() {
            continue;
        }
        let weights: Vec<f64> = odd.iter().map(|(_, w)| *w).collect();
        let trig = term_trig(&weights, angles.gamma);
        let nu_l = nu(l.len(), k.len(), angles.beta);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut families = Vec::new();
        for &mask in &masks {
            let a = alpha(&trig, mask);
            sum += a;
            if keep_records {
                families.push(FamilyRecord {
                    terms: families::mask_members(&supports, mask),
                    alpha: a,
                });
            }
        }
        let rho = nu_l * sum;
        total += rho;
        if keep_records {
            records.push(LRecord {
                l,
                nu: nu_l,
                odd_terms: supports.len(),
                families,
                rho,
            });
        }
    }
    if total.im.abs() > REALNESS_TOLERANCE {
        return Err(LmcError::NonRealExpectation { imag: total.im });
    }
    Ok((total.re, records, total.im))
}

/// `⟨γ,β|Z_K|γ,β⟩` with its full decomposition.
pub fn expectation_zk(
    h: &DiagonalHamiltonian,
    k: VertexSet,
    angles: QaoaAngles,
) -> Result<(f64, ZkBreakdown)> {
    if k.is_empty() {
        return Err(LmcError::InvalidParams("K must be nonempty".into()));
    }
    let (total, records, imag) = evaluate(h, k, angles, true)?;
    Ok((
        total,
        ZkBreakdown {
            k,
            angles,
            records,
            total,
            imaginary_residue: imag,
        },
    ))
}

/// `⟨Z_K⟩` without building the breakdown.
pub fn expectation_zk_value(h: &DiagonalHamiltonian, k: VertexSet, angles: QaoaAngles) -> Result<f64> {
    if k.is_empty() {
        return Ok(1.0);
    }
    evaluate(h, k, angles, false).map(|(v, _, _)| v)
}

/// `F(γ,β) = W_∅ + Σ_{K∈ℳ} W_K ⟨Z_K⟩`.
pub fn expectation_full(h: &DiagonalHamiltonian, angles: QaoaAngles) -> Result<f64> {
    let mut total = h.constant();
    for (k, w) in h.support_terms() {
        total += w * expectation_zk_value(h, k, angles)?;
    }
    Ok(total)
}

mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}
