//! Dense single-round QAOA simulation, used as an oracle for the analytic
//! engine.
//!
//! Basis index bit `i` holds `x_i`; `Z_i` has eigenvalue `(-1)^{x_i}`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{LmcError, Result};
use crate::hamiltonian::DiagonalHamiltonian;
use crate::qaoa::QaoaAngles;

/// Largest supported qubit count (2^26 amplitudes, 1 GiB).
pub const MAX_QUBITS: usize = 26;

/// Below this many nonconstant terms the diagonal is evaluated directly.
const GRAY_THRESHOLD: usize = 8;

/// Gray-code walks run over blocks of this many low bits.
const BLOCK_BITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct State {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_qubits(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(LmcError::Capacity {
            what: "statevector qubits",
            got: n,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

impl State {
    /// `|x⟩` for the basis index `x`.
    pub fn basis(n: usize, x: u64) -> Result<Self> {
        check_qubits(n)?;
        if x >= 1u64 << n {
            return Err(LmcError::InvalidParams(format!(
                "basis index {x} out of range for {n} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[x as usize] = Complex64::new(1.0, 0.0);
        Ok(State { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(LmcError::InvalidParams(
                "amplitude count must be a power of two".into(),
            ));
        }
        let n = amps.len().trailing_zeros() as usize;
        check_qubits(n)?;
        Ok(State { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.par_iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// `|s⟩ = |+⟩^n`.
pub fn uniform_state(n: usize) -> Result<State> {
    check_qubits(n)?;
    let a = (0.5f64).powf(n as f64 / 2.0);
    Ok(State {
        n,
        amps: vec![Complex64::new(a, 0.0); 1 << n],
    })
}

fn check_dims(h: &DiagonalHamiltonian, state: &State) -> Result<()> {
    if h.n() != state.n {
        return Err(LmcError::DimensionMismatch {
            expected: state.n,
            got: h.n(),
        });
    }
    Ok(())
}

/// `evaluate_bits(x)` for every basis index.
pub fn diagonal(h: &DiagonalHamiltonian) -> Result<Vec<f64>> {
    check_qubits(h.n())?;
    let n = h.n();
    let size = 1usize << n;
    let terms: Vec<(u64, f64)> = h.support_terms().map(|(s, w)| (s.bits(), w)).collect();
    let mut out = vec![0.0; size];
    if terms.len() < GRAY_THRESHOLD || n <= 2 {
        out.par_iter_mut()
            .enumerate()
            .for_each(|(x, v)| *v = h.evaluate_bits(x as u64));
        return Ok(out);
    }
    let constant = h.constant();
    let block_bits = BLOCK_BITS.min(n);
    let mut by_bit: Vec<Vec<usize>> = vec![Vec::new(); block_bits];
    for (t, &(s, _)) in terms.iter().enumerate() {
        for (b, list) in by_bit.iter_mut().enumerate() {
            if (s >> b) & 1 == 1 {
                list.push(t);
            }
        }
    }
    out.par_chunks_mut(1 << block_bits)
        .enumerate()
        .for_each(|(chunk, block)| {
            let base = (chunk as u64) << block_bits;
            let mut signs: Vec<f64> = terms
                .iter()
                .map(|&(s, _)| if (s & base).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
                .collect();
            let mut value = constant
                + terms
                    .iter()
                    .zip(&signs)
                    .map(|(&(_, w), &sg)| w * sg)
                    .sum::<f64>();
            block[0] = value;
            for i in 1..block.len() {
                let bit = i.trailing_zeros() as usize;
                for &t in &by_bit[bit] {
                    value -= 2.0 * terms[t].1 * signs[t];
                    signs[t] = -signs[t];
                }
                block[i ^ (i >> 1)] = value;
            }
        });
    Ok(out)
}

fn phase_with(diag: &[f64], gamma: f64, state: &mut State) {
    state
        .amps
        .par_iter_mut()
        .zip(diag.par_iter())
        .for_each(|(a, &e)| *a *= Complex64::from_polar(1.0, -gamma * e));
}

/// Multiply amplitude `x` by `exp(−iγ·E(x))`.
pub fn apply_phase(h: &DiagonalHamiltonian, gamma: f64, state: &mut State) -> Result<()> {
    check_dims(h, state)?;
    let d = diagonal(h)?;
    phase_with(&d, gamma, state);
    Ok(())
}

/// `exp(−iβX)` on every qubit.
pub fn apply_mixer(beta: f64, state: &mut State) {
    let (s, c) = beta.sin_cos();
    let mis = Complex64::new(0.0, -s);
    for q in 0..state.n {
        let half = 1usize << q;
        state.amps.par_chunks_mut(2 * half).for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x * c + mis * y;
                *b = mis * x + y * c;
            }
        });
    }
}

fn expectation_with(diag: &[f64], state: &State) -> f64 {
    state
        .amps
        .par_iter()
        .zip(diag.par_iter())
        .map(|(a, &e)| a.norm_sqr() * e)
        .sum()
}

/// `Σ_x |a_x|² E(x)`.
pub fn expectation_sv(h: &DiagonalHamiltonian, state: &State) -> Result<f64> {
    check_dims(h, state)?;
    let d = diagonal(h)?;
    Ok(expectation_with(&d, state))
}

/// The state `e^{−iβΣX} e^{−iγH} |s⟩`.
pub fn qaoa_state(h: &DiagonalHamiltonian, angles: QaoaAngles) -> Result<State> {
    let mut state = uniform_state(h.n())?;
    let d = diagonal(h)?;
    phase_with(&d, angles.gamma, &mut state);
    apply_mixer(angles.beta, &mut state);
    Ok(state)
}

/// `F(γ,β)` by dense simulation.
pub fn qaoa_expectation_sv(h: &DiagonalHamiltonian, angles: QaoaAngles) -> Result<f64> {
    let mut state = uniform_state(h.n())?;
    let d = diagonal(h)?;
    phase_with(&d, angles.gamma, &mut state);
    apply_mixer(angles.beta, &mut state);
    Ok(expectation_with(&d, &state))
}
