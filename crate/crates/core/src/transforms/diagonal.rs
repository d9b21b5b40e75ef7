//! Diagonal operators `Σ_j P(ω^j) |j⟩⟨j|` from GQSP over the root-of-unity
//! operator `U_ω = Σ_j ω^j |j⟩⟨j|`, `ω = e^{2πi/N}`, `N = 2^n`.
//!
//! `U_ω` itself is one phase gate per qubit: qubit `j` (little-endian, so
//! index `x = Σ x_j 2^j`) gets phase `2π·2^j/N`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{simulate, BlockEncoding};
use crate::completion::CompletionStrategy;
use crate::error::{GqspError, Result};
use crate::poly::LaurentPoly;
use crate::realize::{admissible_scale, realize, Realization};

/// Dense simulation above this many qubits is not attempted.
pub const MAX_QUBITS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseGateList {
    /// Phase of qubit `j`, ascending `j`.
    pub phases: Vec<f64>,
}

impl PhaseGateList {
    pub fn n_qubits(&self) -> usize {
        self.phases.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.phases.len()
    }

    /// Diagonal of the tensor product of `diag(1, e^{iφ_j})`.
    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim())
            .map(|x| {
                let phase: f64 = self
                    .phases
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| x >> j & 1 == 1)
                    .map(|(_, p)| p)
                    .sum();
                Complex64::from_polar(1.0, phase)
            })
            .collect()
    }

    pub fn operator(&self) -> DMatrix<Complex64> {
        let d = self.diagonal();
        DMatrix::from_diagonal(&DVector::from_vec(d))
    }
}

fn check_qubits(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(GqspError::InvalidArgument(format!(
            "n_qubits must lie in 1..={MAX_QUBITS}, got {n_qubits}"
        )));
    }
    Ok(())
}

pub fn synth_root_of_unity_plan(n_qubits: usize) -> Result<PhaseGateList> {
    check_qubits(n_qubits)?;
    let n = (1usize << n_qubits) as f64;
    Ok(PhaseGateList {
        phases: (0..n_qubits)
            .map(|j| 2.0 * PI * (1usize << j) as f64 / n)
            .collect(),
    })
}

/// `U_ω` built entry by entry.
pub fn root_of_unity_operator(n: usize) -> DMatrix<Complex64> {
    DMatrix::from_diagonal(&DVector::from_fn(n, |j, _| {
        Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)
    }))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagonalSynthesis {
    pub n_qubits: usize,
    /// The signal operator the plan runs against.
    pub signal: PhaseGateList,
    #[serde(flatten)]
    pub realization: Realization,
}

impl DiagonalSynthesis {
    pub fn scale(&self) -> f64 {
        self.realization.scale
    }

    pub fn simulate(&self) -> Result<BlockEncoding> {
        simulate(&self.realization.plan, &self.signal.operator())
    }

    /// Simulated diagonal of the top-left block, times `scale`.
    pub fn diagonal(&self) -> Result<Vec<Complex64>> {
        let tl = self.simulate()?.top_left;
        Ok((0..tl.nrows()).map(|j| tl[(j, j)] * self.scale()).collect())
    }
}

/// `diag(P(ω^j)) / scale` over `n_qubits` qubits.
pub fn synth_diagonal(
    p: &LaurentPoly,
    n_qubits: usize,
    strategy: &CompletionStrategy,
) -> Result<DiagonalSynthesis> {
    let signal = synth_root_of_unity_plan(n_qubits)?;
    let n = signal.dim();
    if p.span() > n - 1 {
        return Err(GqspError::InvalidArgument(format!(
            "filter spans {} degrees; at most N - 1 = {} are distinguishable",
            p.span(),
            n - 1
        )));
    }
    let realization = realize(p, admissible_scale(p), strategy)?;
    Ok(DiagonalSynthesis {
        n_qubits,
        signal,
        realization,
    })
}

/// `P(z) = (1 + z)/2`, whose diagonal over `U_ω` is `(1 + ω^x)/2`.
pub fn bit_function_filter() -> LaurentPoly {
    LaurentPoly::from_real(&[0.5, 0.5]).expect("non-empty")
}
