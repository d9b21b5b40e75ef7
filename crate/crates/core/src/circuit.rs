//! Dense simulation of GQSP gate sequences.
//!
//! The ancilla is the most significant tensor factor: a `2N × 2N` operator is
//! laid out as `[[TL, TR], [BL, BR]]` with the ancilla-`|0⟩` block first.
//! The signal gate is `A = diag(U, I)` (U fires on ancilla `|0⟩`), the
//! conjugate signal gate is `A' = diag(I, U†)`, and a rotation acts as
//! `R(θ, φ, λ) ⊗ I_N`.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GqspError, Result};
use crate::poly::LaurentPoly;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance on `‖U†U − I‖_F` for caller-supplied unitaries.
pub const UNITARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gate {
    Rotation {
        theta: f64,
        phi: f64,
        lambda: f64,
    },
    #[serde(rename = "signal")]
    SignalU,
    #[serde(rename = "signal_dag")]
    SignalUdg,
}

impl Gate {
    pub fn kind(&self) -> &'static str {
        match self {
            Gate::Rotation { .. } => "rotation",
            Gate::SignalU => "signal",
            Gate::SignalUdg => "signal_dag",
        }
    }
}

/// Gates in application order: the first entry acts first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitPlan {
    gates: Vec<Gate>,
}

impl CircuitPlan {
    /// Checks alternation (rotation first and last) and that only the first
    /// rotation carries a `λ`.
    pub fn new(gates: Vec<Gate>) -> Result<Self> {
        if gates.is_empty() {
            return Err(GqspError::InvalidPlan("plan has no gates".into()));
        }
        for (i, g) in gates.iter().enumerate() {
            let want_rotation = i % 2 == 0;
            match (g, want_rotation) {
                (Gate::Rotation { theta, phi, lambda }, true) => {
                    if !(theta.is_finite() && phi.is_finite() && lambda.is_finite()) {
                        return Err(GqspError::InvalidPlan(format!(
                            "gate {i} has non-finite angles"
                        )));
                    }
                    if i > 0 && *lambda != 0.0 {
                        return Err(GqspError::InvalidPlan(format!(
                            "only the first rotation may carry lambda (gate {i})"
                        )));
                    }
                }
                (Gate::SignalU | Gate::SignalUdg, false) => {}
                _ => {
                    return Err(GqspError::InvalidPlan(format!(
                        "gate {i} ({}) breaks rotation/signal alternation",
                        g.kind()
                    )))
                }
            }
        }
        if gates.len().is_multiple_of(2) {
            return Err(GqspError::InvalidPlan(
                "plan must end with a rotation".into(),
            ));
        }
        Ok(Self { gates })
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Number of signal slots (the polynomial degree).
    pub fn degree(&self) -> usize {
        self.gates.len() / 2
    }

    /// Number of conjugate signal slots.
    pub fn k_negative(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::SignalUdg))
            .count()
    }
}

impl<'de> Deserialize<'de> for CircuitPlan {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            gates: Vec<Gate>,
        }
        let raw = Raw::deserialize(deserializer)?;
        CircuitPlan::new(raw.gates).map_err(serde::de::Error::custom)
    }
}

/// The four `N × N` blocks of a simulated sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockEncoding {
    pub top_left: DMatrix<Complex64>,
    pub top_right: DMatrix<Complex64>,
    pub bottom_left: DMatrix<Complex64>,
    pub bottom_right: DMatrix<Complex64>,
}

impl BlockEncoding {
    fn from_full(v: &DMatrix<Complex64>) -> Self {
        let n = v.nrows() / 2;
        Self {
            top_left: v.view((0, 0), (n, n)).into_owned(),
            top_right: v.view((0, n), (n, n)).into_owned(),
            bottom_left: v.view((n, 0), (n, n)).into_owned(),
            bottom_right: v.view((n, n), (n, n)).into_owned(),
        }
    }

    pub fn dim(&self) -> usize {
        self.top_left.nrows()
    }

    pub fn assemble(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut v = DMatrix::zeros(2 * n, 2 * n);
        v.view_mut((0, 0), (n, n)).copy_from(&self.top_left);
        v.view_mut((0, n), (n, n)).copy_from(&self.top_right);
        v.view_mut((n, 0), (n, n)).copy_from(&self.bottom_left);
        v.view_mut((n, n), (n, n)).copy_from(&self.bottom_right);
        v
    }

    /// `‖V†V − I‖_F` of the assembled operator.
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.assemble())
    }
}

pub fn unitarity_deviation(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - DMatrix::<Complex64>::identity(n, n)).norm()
}

/// `R(θ, φ, λ) = [[e^{i(λ+φ)} cos θ, e^{iφ} sin θ], [e^{iλ} sin θ, −cos θ]]`.
pub fn rotation_matrix(theta: f64, phi: f64, lambda: f64) -> Matrix2<Complex64> {
    let (c, s) = (theta.cos(), theta.sin());
    Matrix2::new(
        Complex64::from_polar(c, lambda + phi),
        Complex64::from_polar(s, phi),
        Complex64::from_polar(s, lambda),
        Complex64::new(-c, 0.0),
    )
}

fn check_unitary(u: &DMatrix<Complex64>) -> Result<()> {
    if u.nrows() != u.ncols() || u.nrows() == 0 {
        return Err(GqspError::InvalidArgument(format!(
            "signal unitary must be square and non-empty, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let dev = unitarity_deviation(u);
    if !(dev <= UNITARITY_TOL) {
        return Err(GqspError::InvalidArgument(format!(
            "signal operator is not unitary: ‖U†U − I‖_F = {dev:.3e}"
        )));
    }
    Ok(())
}

/// Left-multiplies the `2N × k` operand by each gate in turn.
fn apply_gates(
    plan: &CircuitPlan,
    u: &DMatrix<Complex64>,
    u_dag: &DMatrix<Complex64>,
    state: &mut DMatrix<Complex64>,
) {
    let n = u.nrows();
    let cols = state.ncols();
    for gate in plan.gates() {
        match *gate {
            Gate::Rotation { theta, phi, lambda } => {
                let r = rotation_matrix(theta, phi, lambda);
                let top = state.view((0, 0), (n, cols)).into_owned();
                let bot = state.view((n, 0), (n, cols)).into_owned();
                state
                    .view_mut((0, 0), (n, cols))
                    .copy_from(&(&top * r[(0, 0)] + &bot * r[(0, 1)]));
                state
                    .view_mut((n, 0), (n, cols))
                    .copy_from(&(&top * r[(1, 0)] + &bot * r[(1, 1)]));
            }
            Gate::SignalU => {
                let top = u * state.view((0, 0), (n, cols));
                state.view_mut((0, 0), (n, cols)).copy_from(&top);
            }
            Gate::SignalUdg => {
                let bot = u_dag * state.view((n, 0), (n, cols));
                state.view_mut((n, 0), (n, cols)).copy_from(&bot);
            }
        }
    }
}

/// Product of all gate matrices for signal unitary `u`.
pub fn simulate(plan: &CircuitPlan, u: &DMatrix<Complex64>) -> Result<BlockEncoding> {
    check_unitary(u)?;
    let n = u.nrows();
    let u_dag = u.adjoint();
    let mut v = DMatrix::<Complex64>::identity(2 * n, 2 * n);
    apply_gates(plan, u, &u_dag, &mut v);
    Ok(BlockEncoding::from_full(&v))
}

/// `Σ_n c_n U^n`, with negative powers taken from `U†`.
pub fn poly_of_unitary(p: &LaurentPoly, u: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = u.nrows();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    let lo = p.min_degree();
    let hi = p.degree();
    let step = |base: &DMatrix<Complex64>, k: i64| -> DMatrix<Complex64> {
        let mut m = DMatrix::<Complex64>::identity(n, n);
        for _ in 0..k {
            m = &m * base;
        }
        m
    };
    // Start from U^lo and walk upward.
    let mut power = if lo >= 0 {
        step(u, lo)
    } else {
        step(&u.adjoint(), -lo)
    };
    for k in lo..=hi {
        let c = p.coeff(k);
        if c != ZERO {
            out += &power * c;
        }
        if k < hi {
            power = &power * u;
        }
    }
    out
}

/// `‖TL − P(U)‖_F / √N` for the simulated plan.
pub fn verify_block(
    plan: &CircuitPlan,
    u: &DMatrix<Complex64>,
    target: &LaurentPoly,
) -> Result<f64> {
    let negative = plan.k_negative() as i64;
    if target.min_degree() < -negative {
        return Err(GqspError::InvalidArgument(format!(
            "target has degree {} but the plan only reaches U^-{negative}",
            target.min_degree()
        )));
    }
    let block = simulate(plan, u)?;
    let want = poly_of_unitary(target, u);
    Ok((&block.top_left - want).norm() / (u.nrows() as f64).sqrt())
}

/// Applies the full `2N × 2N` operator to a state vector.
pub fn apply_to_state(
    plan: &CircuitPlan,
    u: &DMatrix<Complex64>,
    state: &DVector<Complex64>,
) -> Result<DVector<Complex64>> {
    check_unitary(u)?;
    let n = u.nrows();
    if state.len() != 2 * n {
        return Err(GqspError::InvalidArgument(format!(
            "state has length {}, expected {}",
            state.len(),
            2 * n
        )));
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(GqspError::InvalidArgument(format!(
            "state norm {norm} is not 1"
        )));
    }
    let mut m = DMatrix::from_column_slice(2 * n, 1, state.as_slice());
    apply_gates(plan, u, &u.adjoint(), &mut m);
    Ok(DVector::from_column_slice(m.as_slice()))
}

/// `|0⟩ ⊗ ψ` in the ancilla-major layout.
pub fn ancilla_zero(psi: &DVector<Complex64>) -> DVector<Complex64> {
    let n = psi.len();
    DVector::from_fn(2 * n, |i, _| if i < n { psi[i] } else { ZERO })
}

/// `diag(e^{i t_k})` for the given phases.
pub fn phase_diagonal(phases: &[f64]) -> DMatrix<Complex64> {
    DMatrix::from_diagonal(&DVector::from_iterator(
        phases.len(),
        phases.iter().map(|&t| Complex64::from_polar(1.0, t)),
    ))
}

pub fn identity(n: usize) -> DMatrix<Complex64> {
    DMatrix::from_diagonal_element(n, n, ONE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::{plan_circuit, reconstruct_polynomials, GqspAngles};
    use crate::sampling::{random_angles, random_unitary};
    use rand::SeedableRng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn rot(theta: f64, phi: f64, lambda: f64) -> Gate {
        Gate::Rotation { theta, phi, lambda }
    }

    #[test]
    fn rotation_examples() {
        let c = |re: f64| Complex64::new(re, 0.0);
        let close = |a: Matrix2<Complex64>, b: Matrix2<Complex64>| (a - b).norm() < 1e-15;
        assert!(close(
            rotation_matrix(0.0, 0.0, 0.0),
            Matrix2::new(c(1.0), c(0.0), c(0.0), c(-1.0))
        ));
        assert!(close(
            rotation_matrix(FRAC_PI_2, 0.0, 0.0),
            Matrix2::new(c(0.0), c(1.0), c(1.0), c(-0.0))
        ));
        let h = 0.5f64.sqrt();
        assert!(close(
            rotation_matrix(FRAC_PI_4, 0.0, 0.0),
            Matrix2::new(c(h), c(h), c(h), c(-h))
        ));
        let r = rotation_matrix(0.3, 1.1, -0.7);
        assert!((r.adjoint() * r - Matrix2::identity()).norm() < 1e-15);
    }

    #[test]
    fn plan_validation() {
        assert!(CircuitPlan::new(vec![]).is_err());
        assert!(CircuitPlan::new(vec![Gate::SignalU]).is_err());
        assert!(CircuitPlan::new(vec![rot(0.0, 0.0, 0.0), Gate::SignalU]).is_err());
        assert!(CircuitPlan::new(vec![rot(0.0, 0.0, 0.0), rot(0.0, 0.0, 0.0)]).is_err());
        assert!(
            CircuitPlan::new(vec![rot(0.0, 0.0, 0.0), Gate::SignalU, rot(0.0, 0.0, 0.5)]).is_err()
        );
        let ok = CircuitPlan::new(vec![
            rot(0.0, 0.0, 0.5),
            Gate::SignalUdg,
            rot(0.1, 0.0, 0.0),
        ])
        .unwrap();
        assert_eq!(ok.degree(), 1);
        assert_eq!(ok.k_negative(), 1);
    }

    #[test]
    fn circuit_json_shape() {
        let plan =
            CircuitPlan::new(vec![rot(0.5, 0.0, 1.0), Gate::SignalU, rot(0.25, 0.0, 0.0)]).unwrap();
        let s = serde_json::to_string(&plan).unwrap();
        assert_eq!(
            s,
            r#"{"gates":[{"kind":"rotation","theta":0.5,"phi":0.0,"lambda":1.0},{"kind":"signal"},{"kind":"rotation","theta":0.25,"phi":0.0,"lambda":0.0}]}"#
        );
        let back: CircuitPlan = serde_json::from_str(&s).unwrap();
        assert_eq!(back, plan);
        assert!(
            serde_json::from_str::<CircuitPlan>(r#"{"gates":[{"kind":"signal_dag"}]}"#).is_err()
        );
    }

    #[test]
    fn single_rotation_is_identity_block() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let u = random_unitary(4, &mut rng);
        let plan = CircuitPlan::new(vec![rot(0.0, 0.0, 0.0)]).unwrap();
        let block = simulate(&plan, &u).unwrap();
        assert!((block.top_left - identity(4)).norm() < 1e-15);
    }

    #[test]
    fn monomial_plan_applies_u() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let u = random_unitary(3, &mut rng);
        let angles = GqspAngles {
            theta: vec![0.0, 0.0],
            phi: vec![0.0, 0.0],
            lambda: 0.0,
        };
        let plan = plan_circuit(&angles, 0).unwrap();
        let block = simulate(&plan, &u).unwrap();
        assert!((&block.top_left - &u).norm() < 1e-14);

        let psi = DVector::from_fn(3, |i, _| Complex64::new(i as f64 + 1.0, 0.5 - i as f64));
        let psi = &psi / Complex64::new(psi.norm(), 0.0);
        let out = apply_to_state(&plan, &u, &ancilla_zero(&psi)).unwrap();
        let want = ancilla_zero(&(&u * &psi));
        assert!((out - want).norm() < 1e-14);
    }

    #[test]
    fn scalar_signal_matches_polynomial_evaluation() {
        let angles = GqspAngles {
            theta: vec![FRAC_PI_4, FRAC_PI_4],
            phi: vec![0.0, 0.0],
            lambda: 0.0,
        };
        let plan = plan_circuit(&angles, 0).unwrap();
        for k in 0..32 {
            let t = 2.0 * PI * k as f64 / 32.0;
            let u = phase_diagonal(&[t]);
            let block = simulate(&plan, &u).unwrap();
            let want = (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, t)) * 0.5;
            assert!((block.top_left[(0, 0)] - want).norm() < 1e-15);
        }
    }

    #[test]
    fn unitarity_and_grid_consistency() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let angles = random_angles(40, &mut rng);
        let (p, q) = reconstruct_polynomials(&angles).unwrap();
        let plan = plan_circuit(&angles, 0).unwrap();
        let phases: Vec<f64> = (0..64).map(|k| 2.0 * PI * k as f64 / 64.0).collect();
        let block = simulate(&plan, &phase_diagonal(&phases)).unwrap();
        assert!(block.unitarity_deviation() < 1e-10);
        for (k, &t) in phases.iter().enumerate() {
            assert!((block.top_left[(k, k)] - p.eval(t)).norm() < 1e-9);
            assert!((block.bottom_left[(k, k)] - q.eval(t)).norm() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let plan = CircuitPlan::new(vec![rot(0.0, 0.0, 0.0)]).unwrap();
        let not_unitary = DMatrix::from_element(2, 2, Complex64::new(1.0, 0.0));
        assert!(simulate(&plan, &not_unitary).is_err());
        let u = identity(2);
        assert!(apply_to_state(&plan, &u, &DVector::from_element(3, ONE)).is_err());
        assert!(apply_to_state(&plan, &u, &DVector::from_element(4, ONE)).is_err());
        let target = LaurentPoly::monomial(-1);
        assert!(verify_block(&plan, &u, &target).is_err());
    }

    #[test]
    fn verify_trivial_plan() {
        let plan = CircuitPlan::new(vec![rot(0.0, 0.0, 0.0)]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let u = random_unitary(5, &mut rng);
        assert!(verify_block(&plan, &u, &LaurentPoly::from_real(&[1.0]).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn poly_of_unitary_handles_negative_powers() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let u = random_unitary(4, &mut rng);
        // z^-1 + 2 z^2
        let p = LaurentPoly::new(
            vec![
                Complex64::new(1.0, 0.0),
                ZERO,
                ZERO,
                Complex64::new(2.0, 0.0),
            ],
            -1,
        )
        .unwrap();
        let want = u.adjoint() + &u * &u * Complex64::new(2.0, 0.0);
        assert!((poly_of_unitary(&p, &u) - want).norm() < 1e-13);
    }
}
