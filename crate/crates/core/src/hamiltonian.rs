//! Diagonal cost Hamiltonians `H = Σ_S W_S Z_S`.
//!
//! A Boolean clause `C` on `k` variables is encoded through its Fourier
//! expansion `C(x) = Σ_S Ĉ(S) χ_S(x)` with `χ_S(x) = Π_{i∈S} (-1)^{x_i}`;
//! summing the encodings of all clauses gives the weights `W_S`.
//!
//! Basis convention: bit `i` of a basis index is the value `x_i` of qubit
//! (vertex) `i`, so `Z_S |x⟩ = χ_S(x) |x⟩`. For cuts, `x_i = 1` stands for
//! `τ(i) = -1`; LocalMaxCut values do not depend on this choice because
//! satisfaction is invariant under a global flip.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{LmcError, Result};
use crate::graph::Graph;
use crate::subset::{VertexSet, MAX_VERTICES};

/// Largest clause arity the encoder accepts.
pub const MAX_CLAUSE_ARITY: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    support: Vec<usize>,
    truth_table: Vec<f64>,
}

impl Clause {
    /// `truth_table[x]` is the clause value when `support[i]` takes bit `i`
    /// of `x`.
    pub fn new(support: Vec<usize>, truth_table: Vec<f64>) -> Result<Self> {
        let k = support.len();
        if k > MAX_CLAUSE_ARITY {
            return Err(LmcError::Capacity {
                what: "clause arity",
                got: k,
                max: MAX_CLAUSE_ARITY,
            });
        }
        if truth_table.len() != 1 << k {
            return Err(LmcError::DimensionMismatch {
                expected: 1 << k,
                got: truth_table.len(),
            });
        }
        let distinct: std::collections::BTreeSet<_> = support.iter().collect();
        if distinct.len() != k {
            return Err(LmcError::InvalidParams(format!(
                "clause support has repeated vertices: {support:?}"
            )));
        }
        if let Some(&v) = support.iter().find(|&&v| v >= MAX_VERTICES) {
            return Err(LmcError::Capacity {
                what: "vertex index",
                got: v,
                max: MAX_VERTICES - 1,
            });
        }
        Ok(Clause {
            support,
            truth_table,
        })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn truth_table(&self) -> &[f64] {
        &self.truth_table
    }

    pub fn arity(&self) -> usize {
        self.support.len()
    }

    /// Same clause re-attached to different vertices (e.g. a neighborhood `B(v)`).
    pub fn relabel(&self, support: Vec<usize>) -> Result<Self> {
        Clause::new(support, self.truth_table.clone())
    }
}

/// "At least `⌈d/2⌉` of the `d` edges at the first variable are cut."
///
/// Variable 0 is the center vertex, variables `1..=d` its neighbors, laid out
/// on the placeholder support `0..=d`.
pub fn local_satisfaction_clause(d: usize) -> Result<Clause> {
    if d == 0 {
        return Err(LmcError::UnsupportedDegree(d));
    }
    let k = d + 1;
    if k > MAX_CLAUSE_ARITY {
        return Err(LmcError::Capacity {
            what: "clause arity",
            got: k,
            max: MAX_CLAUSE_ARITY,
        });
    }
    let need = d.div_ceil(2);
    let table = (0..1usize << k)
        .map(|x| {
            let center = x & 1;
            let cut = (1..k).filter(|&i| (x >> i) & 1 != center).count();
            if cut >= need {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    Clause::new((0..k).collect(), table)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHamiltonian {
    n: usize,
    terms: BTreeMap<VertexSet, f64>,
}

impl DiagonalHamiltonian {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(LmcError::Capacity {
                what: "qubit count",
                got: n,
                max: MAX_VERTICES,
            });
        }
        Ok(DiagonalHamiltonian {
            n,
            terms: BTreeMap::new(),
        })
    }

    /// Builds from explicit `(support, weight)` pairs, accumulating repeats.
    pub fn from_terms<I: IntoIterator<Item = (VertexSet, f64)>>(n: usize, terms: I) -> Result<Self> {
        let mut h = Self::new(n)?;
        for (s, w) in terms {
            h.add_term(s, w)?;
        }
        Ok(h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds `w` to `W_S`; a weight that cancels to exactly zero is removed.
    pub fn add_term(&mut self, support: VertexSet, weight: f64) -> Result<()> {
        if support.span() > self.n {
            return Err(LmcError::VertexOutOfRange {
                vertex: support.span() - 1,
                n: self.n,
            });
        }
        let entry = self.terms.entry(support).or_insert(0.0);
        *entry += weight;
        if *entry == 0.0 {
            self.terms.remove(&support);
        }
        Ok(())
    }

    /// Term-wise sum of `other` into `self`.
    pub fn accumulate(&mut self, other: &DiagonalHamiltonian) -> Result<()> {
        for (&s, &w) in &other.terms {
            self.add_term(s, w)?;
        }
        Ok(())
    }

    /// `W_S`, zero when absent.
    pub fn weight(&self, support: VertexSet) -> f64 {
        self.terms.get(&support).copied().unwrap_or(0.0)
    }

    /// Coefficient of the identity.
    pub fn constant(&self) -> f64 {
        self.weight(VertexSet::EMPTY)
    }

    /// All stored terms (nonzero weights), the identity included, in
    /// ascending bitmask order.
    pub fn terms(&self) -> impl Iterator<Item = (VertexSet, f64)> + '_ {
        self.terms.iter().map(|(&s, &w)| (s, w))
    }

    /// `ℳ`: nonempty supports with nonzero weight, ascending bitmask order.
    pub fn support_terms(&self) -> impl Iterator<Item = (VertexSet, f64)> + '_ {
        self.terms().filter(|(s, _)| !s.is_empty())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `Σ_S W_S χ_S(x)` on the basis state whose bit `i` is `x_i`.
    pub fn evaluate_bits(&self, x: u64) -> f64 {
        self.terms.iter().map(|(s, w)| w * s.parity_sign(x)).sum()
    }

    pub fn evaluate_classical(&self, x: &[bool]) -> Result<f64> {
        if x.len() != self.n {
            return Err(LmcError::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let bits = x
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i));
        Ok(self.evaluate_bits(bits))
    }

    pub fn to_json(&self) -> HamiltonianJson {
        HamiltonianJson {
            n: self.n,
            terms: self
                .terms()
                .map(|(subset, weight)| TermJson { subset, weight })
                .collect(),
        }
    }

    pub fn from_json(json: &HamiltonianJson) -> Result<Self> {
        Self::from_terms(json.n, json.terms.iter().map(|t| (t.subset, t.weight)))
    }
}

/// JSON form: `{"n": .., "terms": [{"subset": [sorted vertices], "weight": w}, ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub subset: VertexSet,
    pub weight: f64,
}

/// In-place Walsh–Hadamard transform (unnormalized).
fn walsh_hadamard(values: &mut [f64]) {
    let len = values.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (values[i], values[i + h]);
                values[i] = a + b;
                values[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// `Ĉ(S) = 2^{-k} Σ_x C(x) χ_S(x)`, re-keyed onto the clause's support.
pub fn fourier_encode_clause(clause: &Clause) -> Result<DiagonalHamiltonian> {
    let k = clause.arity();
    let mut coeffs = clause.truth_table.clone();
    walsh_hadamard(&mut coeffs);
    let scale = 1.0 / (1u64 << k) as f64;
    let n = clause.support.iter().map(|&v| v + 1).max().unwrap_or(0);
    let mut h = DiagonalHamiltonian::new(n)?;
    for (local, c) in coeffs.into_iter().enumerate() {
        let c = c * scale;
        if c != 0.0 {
            let support = (0..k)
                .filter(|i| (local >> i) & 1 == 1)
                .map(|i| clause.support[i])
                .collect::<VertexSet>();
            h.add_term(support, c)?;
        }
    }
    Ok(h)
}

/// Sums encoded clauses into one `n`-qubit Hamiltonian.
pub fn hamiltonian_from_clauses<'a, I>(n: usize, clauses: I) -> Result<DiagonalHamiltonian>
where
    I: IntoIterator<Item = &'a Clause>,
{
    let mut h = DiagonalHamiltonian::new(n)?;
    for clause in clauses {
        h.accumulate(&fourier_encode_clause(clause)?)?;
    }
    Ok(h)
}

/// One local satisfaction clause per vertex, on `B(v)`.
pub fn localmaxcut_clauses(g: &Graph) -> Result<Vec<Clause>> {
    let d = g.require_regular()?;
    let template = local_satisfaction_clause(d)?;
    (0..g.n())
        .map(|v| template.relabel(g.neighborhood(v)?))
        .collect()
}

/// `H = Σ_v H_v` for a regular graph on at most 64 vertices.
pub fn build_localmaxcut_hamiltonian(g: &Graph) -> Result<DiagonalHamiltonian> {
    if g.n() > MAX_VERTICES {
        return Err(LmcError::Capacity {
            what: "vertex count",
            got: g.n(),
            max: MAX_VERTICES,
        });
    }
    let clauses = localmaxcut_clauses(g)?;
    hamiltonian_from_clauses(g.n(), &clauses)
}
