//! Circulant operators `C = Σ_n c_n 𝒫^n`, `𝒫 = Σ_j |j+1 mod N⟩⟨j|`.
//!
//! `𝒫` is diagonalized by the Fourier transform, `𝒫 = F† U_ω F`, so `C` is a
//! diagonal GQSP plan over `U_ω` between `F` and `F†`. Which sign of the
//! exponent makes `F` work is checked numerically at first use rather than
//! assumed; with `F_{kj} = e^{±2πi jk/N}/√N` it is the `+` sign.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::diagonal::{synth_diagonal, MAX_QUBITS};
use crate::angles::GqspAngles;
use crate::circuit::{ancilla_zero, apply_to_state, simulate, CircuitPlan};
use crate::completion::CompletionStrategy;
use crate::error::{GqspError, Result};
use crate::poly::LaurentPoly;
use crate::transforms::diagonal::root_of_unity_operator;

/// Dimensions at which the Fourier convention is pinned.
pub const CONVENTION_CHECK_DIMS: [usize; 4] = [2, 4, 8, 16];
pub const CONVENTION_TOL: f64 = 1e-12;

pub fn cyclic_permutation_matrix(n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |i, j| {
        if i == (j + 1) % n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `F_{kj} = e^{sign·2πi jk/N} / √N`.
pub fn qft_matrix(n: usize, sign: i32) -> DMatrix<Complex64> {
    let norm = 1.0 / (n as f64).sqrt();
    DMatrix::from_fn(n, n, |k, j| {
        let e = ((j * k) % n) as f64 * 2.0 * PI / n as f64;
        Complex64::from_polar(norm, sign as f64 * e)
    })
}

/// Max entrywise `|F† U_ω F − 𝒫|` for the given sign.
pub fn convention_deviation(n: usize, sign: i32) -> f64 {
    let f = qft_matrix(n, sign);
    let lhs = f.adjoint() * root_of_unity_operator(n) * &f;
    (lhs - cyclic_permutation_matrix(n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// The exponent sign for which `𝒫 = F† U_ω F` holds at every dimension in
/// [`CONVENTION_CHECK_DIMS`].
pub fn dft_sign() -> Result<i32> {
    static SIGN: OnceLock<Option<i32>> = OnceLock::new();
    SIGN.get_or_init(|| {
        [1, -1].into_iter().find(|&s| {
            CONVENTION_CHECK_DIMS
                .iter()
                .all(|&n| convention_deviation(n, s) <= CONVENTION_TOL)
        })
    })
    .ok_or_else(|| {
        GqspError::NumericalDegeneracy("no Fourier sign diagonalizes the cyclic shift".into())
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirculantSpec {
    pub n: usize,
    pub filter: LaurentPoly,
}

impl CirculantSpec {
    pub fn new(n: usize, filter: LaurentPoly) -> Result<Self> {
        let spec = Self { n, filter };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || !self.n.is_power_of_two() || self.n > 1 << MAX_QUBITS {
            return Err(GqspError::InvalidArgument(format!(
                "N must be a power of two in 2..=2^{MAX_QUBITS}, got {}",
                self.n
            )));
        }
        if self.filter.span() > self.n - 1 {
            return Err(GqspError::InvalidArgument(format!(
                "filter spans {} degrees, more than N - 1 = {}",
                self.filter.span(),
                self.n - 1
            )));
        }
        Ok(())
    }

    /// `Σ c_n 𝒫^n` from explicit matrix powers.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let p = cyclic_permutation_matrix(self.n);
        crate::circuit::poly_of_unitary(&self.filter, &p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisChange {
    Dft,
    Idft,
}

/// `post ∘ plan ∘ pre`, acting as `C / scale`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CirculantSynthesis {
    pub pre: BasisChange,
    pub plan: CircuitPlan,
    pub post: BasisChange,
    pub scale: f64,
    pub n: usize,
    pub dft_sign: i32,
    pub angles: GqspAngles,
}

impl CirculantSynthesis {
    fn qft(&self) -> DMatrix<Complex64> {
        qft_matrix(self.n, self.dft_sign)
    }

    /// Simulated `N × N` operator, `≈ C / scale`.
    pub fn operator(&self) -> Result<DMatrix<Complex64>> {
        let f = self.qft();
        let tl = simulate(&self.plan, &root_of_unity_operator(self.n))?.top_left;
        Ok(f.adjoint() * tl * f)
    }

    /// `(C / scale) ψ` by running the plan on the state (ancilla in `|0⟩`,
    /// projected back onto `|0⟩` afterwards).
    pub fn apply(&self, psi: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if psi.len() != self.n {
            return Err(GqspError::InvalidArgument(format!(
                "state has length {}, expected {}",
                psi.len(),
                self.n
            )));
        }
        let norm = psi.norm();
        if norm == 0.0 {
            return Ok(psi.clone());
        }
        let f = self.qft();
        let rotated = &f * psi / Complex64::new(norm, 0.0);
        let out = apply_to_state(
            &self.plan,
            &root_of_unity_operator(self.n),
            &ancilla_zero(&rotated),
        )?;
        let top = out.rows(0, self.n).into_owned();
        Ok(f.adjoint() * top * Complex64::new(norm, 0.0))
    }
}

pub fn synth_circulant(
    spec: &CirculantSpec,
    strategy: &CompletionStrategy,
) -> Result<CirculantSynthesis> {
    spec.validate()?;
    let sign = dft_sign()?;
    let diag = synth_diagonal(&spec.filter, spec.n.trailing_zeros() as usize, strategy)?;
    Ok(CirculantSynthesis {
        pre: BasisChange::Dft,
        plan: diag.realization.plan,
        post: BasisChange::Idft,
        scale: diag.realization.scale,
        n: spec.n,
        dft_sign: sign,
        angles: diag.realization.angles,
    })
}

/// `out_m = Σ_k c_k x_{(m − k) mod N}`.
pub fn circular_convolve_bruteforce(x: &[Complex64], c: &LaurentPoly) -> Vec<Complex64> {
    let n = x.len() as i64;
    (0..n)
        .map(|m| {
            (c.min_degree()..=c.degree())
                .map(|k| c.coeff(k) * x[(m - k).rem_euclid(n) as usize])
                .sum()
        })
        .collect()
}
