//! The one-round randomized local algorithm for LocalMaxCut.
//!
//! Every vertex starts at `+1` with probability `p`, then flips with
//! probability `q_ℓ` where `ℓ` is its number of agreeing neighbors under the
//! initial cut. A vertex is satisfied when `ℓ ≤ ⌊d/2⌋`, i.e. at least
//! `⌈d/2⌉` of its edges are cut.
//!
//! In the exact evaluators an assignment bit of 1 stands for `+1` and is
//! drawn with probability `p`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LmcError, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalParams {
    pub p: f64,
    /// `q[ℓ]` is the flip probability at `ℓ` agreeing neighbors.
    pub q: Vec<f64>,
}

impl ClassicalParams {
    pub fn new(p: f64, q: Vec<f64>) -> Result<Self> {
        let ok = |x: f64| (0.0..=1.0).contains(&x);
        if !ok(p) || !q.iter().all(|&x| ok(x)) {
            return Err(LmcError::InvalidParams(format!(
                "probabilities must lie in [0,1]: p={p}, q={q:?}"
            )));
        }
        if q.is_empty() {
            return Err(LmcError::InvalidParams("q must be nonempty".into()));
        }
        Ok(ClassicalParams { p, q })
    }

    /// The degree these parameters are sized for.
    pub fn degree(&self) -> usize {
        self.q.len() - 1
    }

    pub fn require_degree(&self, d: usize) -> Result<()> {
        if self.q.len() != d + 1 {
            return Err(LmcError::DimensionMismatch {
                expected: d + 1,
                got: self.q.len(),
            });
        }
        Ok(())
    }

    /// `(1−p, q)`: relabels `+1` and `−1`.
    pub fn mirrored(&self) -> Self {
        ClassicalParams {
            p: 1.0 - self.p,
            q: self.q.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    /// `+1` or `−1` per vertex.
    pub assignment: Vec<i8>,
}

impl Cut {
    pub fn uniform(n: usize, value: i8) -> Self {
        Cut {
            assignment: vec![value; n],
        }
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        if let Some(&s) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(LmcError::InvalidParams(format!("cut value {s} is not ±1")));
        }
        Ok(Cut {
            assignment: signs.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Basis bitstring with `x_i = 1` exactly when vertex `i` is `−1`.
    pub fn to_bits(&self) -> Vec<bool> {
        self.assignment.iter().map(|&s| s < 0).collect()
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Cut {
            assignment: bits.iter().map(|&b| if b { -1 } else { 1 }).collect(),
        }
    }
}

/// `ℓ(v)`: neighbors with the same value as `v`.
pub fn agreeing_count(g: &Graph, cut: &Cut, v: usize) -> usize {
    let s = cut.assignment[v];
    g.neighbors(v)
        .iter()
        .filter(|&&u| cut.assignment[u] == s)
        .count()
}

pub fn satisfied(g: &Graph, cut: &Cut, v: usize) -> bool {
    agreeing_count(g, cut, v) <= g.degree_of(v) / 2
}

pub fn satisfied_count(g: &Graph, cut: &Cut) -> usize {
    (0..g.n()).filter(|&v| satisfied(g, cut, v)).count()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundResult {
    pub initial: Cut,
    pub cut: Cut,
    pub satisfied: usize,
}

fn unit(u: u64) -> f64 {
    (u >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn check_round_inputs(g: &Graph, params: &ClassicalParams) -> Result<usize> {
    let d = g.require_regular()?;
    params.require_degree(d)?;
    Ok(d)
}

// Vertex v of trial t consumes words 4v..4v+4 of ChaCha stream t, so a
// vertex's draws do not depend on evaluation order.
fn round_for_trial(g: &Graph, params: &ClassicalParams, seed: u64, trial: u64) -> RoundResult {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut initial = Vec::with_capacity(n);
    let mut flip_draw = Vec::with_capacity(n);
    for _ in 0..n {
        initial.push(if unit(rng.next_u64()) < params.p { 1i8 } else { -1 });
        flip_draw.push(unit(rng.next_u64()));
    }
    let initial = Cut {
        assignment: initial,
    };
    let assignment = (0..n)
        .map(|v| {
            let l = agreeing_count(g, &initial, v);
            let s = initial.assignment[v];
            if flip_draw[v] < params.q[l] {
                -s
            } else {
                s
            }
        })
        .collect();
    let cut = Cut { assignment };
    let satisfied = satisfied_count(g, &cut);
    RoundResult {
        initial,
        cut,
        satisfied,
    }
}

/// One run of the algorithm; deterministic in `seed`.
pub fn run_one_round(g: &Graph, params: &ClassicalParams, seed: u64) -> Result<RoundResult> {
    check_round_inputs(g, params)?;
    Ok(round_for_trial(g, params, seed, 0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub trials: usize,
    pub seed: u64,
    pub n: usize,
    /// Mean satisfied fraction.
    pub mean: f64,
    pub stderr: f64,
    pub counts: Vec<usize>,
}

/// Independent trials of [`run_one_round`], trial `t` using stream `t`.
pub fn monte_carlo(g: &Graph, params: &ClassicalParams, trials: usize, seed: u64) -> Result<RunStats> {
    check_round_inputs(g, params)?;
    if trials == 0 {
        return Err(LmcError::InvalidParams("trials must be at least 1".into()));
    }
    let counts: Vec<usize> = (0..trials as u64)
        .into_par_iter()
        .map(|t| round_for_trial(g, params, seed, t).satisfied)
        .collect();
    let n = g.n() as f64;
    let fractions: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let mean = fractions.iter().sum::<f64>() / trials as f64;
    let stderr = if trials > 1 {
        let var = fractions.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        (var / trials as f64).sqrt()
    } else {
        0.0
    };
    Ok(RunStats {
        trials,
        seed,
        n: g.n(),
        mean,
        stderr,
        counts,
    })
}

/// Threshold rule `q_ℓ = [ℓ ≥ ⌈(d+√d)/2⌉]` at `p = 1/2`.
pub fn threshold_preset(d: usize) -> Result<ClassicalParams> {
    if d == 0 {
        return Err(LmcError::UnsupportedDegree(d));
    }
    let r = ((d as f64 + (d as f64).sqrt()) / 2.0).ceil() as usize;
    let q = (0..=d).map(|l| if l >= r { 1.0 } else { 0.0 }).collect();
    ClassicalParams::new(0.5, q)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `Pr[S_v⁰]` at `p = 1/2`: `2^{−d} Σ_{j ≤ ⌊d/2⌋} C(d, j)`.
pub fn prob_satisfied_initial(d: usize, p: f64) -> Result<f64> {
    if p != 0.5 {
        return Err(LmcError::InvalidParams(format!(
            "closed form holds only at p = 1/2 (got {p}); use the neighborhood oracle"
        )));
    }
    if d == 0 {
        return Err(LmcError::UnsupportedDegree(d));
    }
    let s: f64 = (0..=d / 2).map(|j| binomial(d, j)).sum();
    Ok(s / 2f64.powi(d as i32))
}

/// `f_ab`: probability that a neighbor with initial value `b` flips, given
/// the center has initial value `a`.
pub fn flip_prob(a: bool, b: bool, params: &ClassicalParams, d: usize) -> Result<f64> {
    params.require_degree(d)?;
    let p = params.p;
    let r = 1.0 - p;
    let q = &params.q;
    match d {
        2 => Ok(match (a, b) {
            (false, false) => r * q[2] + p * q[1],
            (false, true) => p * q[1] + r * q[0],
            (true, false) => r * q[1] + p * q[0],
            (true, true) => p * q[2] + r * q[1],
        }),
        3 => Ok(match (a, b) {
            (false, false) => q[3] * r * r + 2.0 * q[2] * p * r + q[1] * p * p,
            (false, true) => q[0] * r * r + 2.0 * q[1] * p * r + q[2] * p * p,
            (true, false) => q[2] * r * r + 2.0 * q[1] * p * r + q[0] * p * p,
            (true, true) => q[1] * r * r + 2.0 * q[2] * p * r + q[3] * p * p,
        }),
        _ => Err(LmcError::UnsupportedDegree(d)),
    }
}

fn bit(x: u32, i: usize) -> bool {
    (x >> i) & 1 == 1
}

fn assignment_weight(x: u32, len: usize, p: f64) -> f64 {
    let ones = (x & ((1u32 << len) - 1)).count_ones() as i32;
    p.powi(ones) * (1.0 - p).powi(len as i32 - ones)
}

/// `Pr[S_v¹ | τ₀(B(v)) = ball]` from the `f_ab`, for `d ∈ {2, 3}`. Bit 0 of
/// `ball` is `v`, bit `i` its `i`-th neighbor.
pub fn conditional_prob(d: usize, params: &ClassicalParams, ball: u32) -> Result<f64> {
    params.require_degree(d)?;
    let a = bit(ball, 0);
    let l = (1..=d).filter(|&i| bit(ball, i) == a).count();
    let qv = params.q[l];
    let mut f = Vec::with_capacity(d);
    for i in 1..=d {
        f.push(flip_prob(a, bit(ball, i), params, d)?);
    }
    let need = d.div_ceil(2);
    let mut total = 0.0;
    for x in 0..(1u32 << (d + 1)) {
        let xv = bit(x, 0);
        let cut = (1..=d).filter(|&i| bit(x, i) != xv).count();
        if cut < need {
            continue;
        }
        let mut term = if xv != a { qv } else { 1.0 - qv };
        for i in 1..=d {
            let flipped = bit(x, i) != bit(ball, i);
            term *= if flipped { f[i - 1] } else { 1.0 - f[i - 1] };
        }
        total += term;
    }
    Ok(total)
}

fn full_condition_sum(d: usize, params: &ClassicalParams) -> Result<f64> {
    let mut total = 0.0;
    for ball in 0..(1u32 << (d + 1)) {
        total += assignment_weight(ball, d + 1, params.p) * conditional_prob(d, params, ball)?;
    }
    Ok(total)
}

/// `Pr[S_v¹ | p, q]` on a degree-2 graph of girth at least 7, summing over
/// all 8 initial assignments of `B(v)`.
pub fn exact_prob_d2(params: &ClassicalParams) -> Result<f64> {
    full_condition_sum(2, params)
}

/// The closed expression that only counts initially unsatisfied
/// neighborhoods. Equal to [`exact_prob_d2`] when `q_0 = q_1 = 0`.
pub fn unsat_only_prob_d2(params: &ClassicalParams) -> Result<f64> {
    params.require_degree(2)?;
    let p = params.p;
    let r = 1.0 - p;
    let (q1, q2) = (params.q[1], params.q[2]);
    Ok(1.0
        - r.powi(3) * (1.0 - q2) * (1.0 - p * q1 - r * q2).powi(2)
        - r.powi(3) * q2 * (p * q1 + r * q2).powi(2)
        - p.powi(3) * (1.0 - q2) * (1.0 - r * q1 - p * q2).powi(2)
        - p.powi(3) * q2 * (r * q1 + p * q2).powi(2))
}

/// Maximizer of [`unsat_only_prob_d2`] over `q_2`.
pub fn q2_star(p: f64, q1: f64) -> Result<f64> {
    let num = -3.0 + 11.0 * p - 15.0 * p.powi(2) + 8.0 * p.powi(3) - 4.0 * p.powi(4)
        + 4.0 * p * q1
        - 14.0 * p.powi(2) * q1
        + 20.0 * p.powi(3) * q1
        - 10.0 * p.powi(4) * q1;
    let den = -6.0 + 26.0 * p - 44.0 * p.powi(2) + 36.0 * p.powi(3) - 18.0 * p.powi(4);
    if den.abs() < 1e-14 {
        return Err(LmcError::SingularDenominator { p });
    }
    Ok(num / den)
}

/// `Pr[S_v¹ | p, 0, q_2*(p, 0)]` as a single rational function of `p`.
pub fn reduced_objective_d2(p: f64) -> Result<f64> {
    let num = 9.0 - 30.0 * p + 19.0 * p.powi(2) + 42.0 * p.powi(3) - 55.0 * p.powi(4)
        - 4.0 * p.powi(5)
        + 76.0 * p.powi(6)
        - 64.0 * p.powi(7)
        + 16.0 * p.powi(8);
    let den = 12.0 - 52.0 * p + 88.0 * p.powi(2) - 72.0 * p.powi(3) + 36.0 * p.powi(4);
    if den.abs() < 1e-14 {
        return Err(LmcError::SingularDenominator { p });
    }
    Ok(num / den)
}

/// `Pr[S_v¹ | p, q]` on a locally tree-like cubic graph: the full sum over
/// the 16 initial assignments of `B(v)`.
pub fn exact_prob_d3(params: &ClassicalParams) -> Result<f64> {
    full_condition_sum(3, params)
}

/// The same probability from the 8 orbit representatives
/// `0000, 0001, 0011, 0111` under the global flip, each paired with its
/// complement at `1−p`.
pub fn exact_prob_d3_reduced(params: &ClassicalParams) -> Result<f64> {
    params.require_degree(3)?;
    let mirrored = params.mirrored();
    let mut total = 0.0;
    for (ball, mult) in [(0b0000u32, 1.0), (0b1000, 3.0), (0b1100, 3.0), (0b1110, 1.0)] {
        let direct = assignment_weight(ball, 4, params.p) * conditional_prob(3, params, ball)?;
        let flipped = assignment_weight(ball, 4, mirrored.p) * conditional_prob(3, &mirrored, ball)?;
        total += mult * (direct + flipped);
    }
    Ok(total)
}

/// Largest degree the brute-force oracle accepts.
pub const ORACLE_MAX_DEGREE: usize = 5;

struct RadiusTwoTree {
    d: usize,
    /// `children[i]` lists the outer vertices hanging off neighbor `i+1`.
    children: Vec<Vec<usize>>,
    size: usize,
}

impl RadiusTwoTree {
    fn new(d: usize) -> Self {
        let children = (0..d)
            .map(|i| (0..d - 1).map(|j| d + 1 + i * (d - 1) + j).collect())
            .collect();
        RadiusTwoTree {
            d,
            children,
            size: 1 + d + d * (d - 1),
        }
    }

    fn satisfied_after_flip(&self, tau: u32, params: &ClassicalParams) -> f64 {
        let d = self.d;
        let v = bit(tau, 0);
        let mut flip = Vec::with_capacity(d + 1);
        flip.push(params.q[(1..=d).filter(|&i| bit(tau, i) == v).count()]);
        for i in 1..=d {
            let own = bit(tau, i);
            let l = usize::from(own == v)
                + self.children[i - 1]
                    .iter()
                    .filter(|&&c| bit(tau, c) == own)
                    .count();
            flip.push(params.q[l]);
        }
        let need = d.div_ceil(2);
        let mut total = 0.0;
        for pattern in 0..(1u32 << (d + 1)) {
            let mut prob = 1.0;
            for (j, &f) in flip.iter().enumerate() {
                prob *= if bit(pattern, j) { f } else { 1.0 - f };
            }
            let v1 = v ^ bit(pattern, 0);
            let cut = (1..=d)
                .filter(|&i| (bit(tau, i) ^ bit(pattern, i)) != v1)
                .count();
            if cut >= need {
                total += prob;
            }
        }
        total
    }
}

fn oracle_checks(d: usize, params: &ClassicalParams) -> Result<()> {
    if !(1..=ORACLE_MAX_DEGREE).contains(&d) {
        return Err(LmcError::Capacity {
            what: "neighborhood oracle degree",
            got: d,
            max: ORACLE_MAX_DEGREE,
        });
    }
    params.require_degree(d)
}

/// `Pr[S_v¹ | τ₀(B(v)) = ball]` by enumerating the outer ring of the
/// radius-2 tree and every flip pattern of `B(v)`.
pub fn neighborhood_oracle_conditional(d: usize, params: &ClassicalParams, ball: u32) -> Result<f64> {
    oracle_checks(d, params)?;
    let tree = RadiusTwoTree::new(d);
    let outer = tree.size - (d + 1);
    let ball = ball & ((1u32 << (d + 1)) - 1);
    let total = (0..1u32 << outer)
        .into_par_iter()
        .map(|rest| {
            let tau = ball | (rest << (d + 1));
            assignment_weight(rest, outer, params.p) * tree.satisfied_after_flip(tau, params)
        })
        .sum();
    Ok(total)
}

/// Exact `Pr[S_v¹]` on the infinite `d`-regular tree by brute force over
/// every initial assignment of the radius-2 ball around `v`.
pub fn neighborhood_oracle_prob(d: usize, params: &ClassicalParams) -> Result<f64> {
    oracle_checks(d, params)?;
    let tree = RadiusTwoTree::new(d);
    let total = (0..1u32 << tree.size)
        .into_par_iter()
        .map(|tau| assignment_weight(tau, tree.size, params.p) * tree.satisfied_after_flip(tau, params))
        .sum();
    Ok(total)
}
