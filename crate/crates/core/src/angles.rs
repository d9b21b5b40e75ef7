//! Rotation angles of a GQSP sequence.
//!
//! The sequence `R(θ_d, φ_d, 0) A ⋯ R(θ_1, φ_1, 0) A R(θ_0, φ_0, λ)` with
//! `A = diag(U, I)` block-encodes `P(U)` in its top-left block and `Q(U)` in
//! the bottom-left block. [`reconstruct_polynomials`] runs the forward
//! recursion on coefficients; [`compute_angles`] peels one layer at a time,
//! undoing `R(θ_k, φ_k, 0) A` so the degree drops by one.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitPlan, Gate};
use crate::completion::validate_completion;
use crate::error::{GqspError, Result};
use crate::poly::LaurentPoly;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Default relative tolerance for the cancellation check.
pub const DEFAULT_ANGLE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GqspAngles {
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub lambda: f64,
}

impl GqspAngles {
    /// Polynomial degree realized by the sequence.
    pub fn degree(&self) -> usize {
        self.theta.len().saturating_sub(1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta.is_empty() || self.theta.len() != self.phi.len() {
            return Err(GqspError::InvalidArgument(format!(
                "theta and phi must be non-empty with equal lengths ({} vs {})",
                self.theta.len(),
                self.phi.len()
            )));
        }
        if !self.lambda.is_finite() || self.theta.iter().chain(&self.phi).any(|x| !x.is_finite()) {
            return Err(GqspError::InvalidArgument("angles must be finite".into()));
        }
        Ok(())
    }
}

/// Argument with `Arg(0) = 0`.
fn arg(z: Complex64) -> f64 {
    if z == ZERO {
        0.0
    } else {
        z.arg()
    }
}

/// Wraps into `(-π, π]`.
fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Converts a valid `(P, Q)` pair into rotation angles.
///
/// Each step picks `θ_k, φ_k` so that the top coefficient of the new `Q` and
/// the bottom coefficient of the new `P` vanish. With exact data the top pair
/// `(a_k, b_k)` gives `θ_k = atan2(|b_k|, |a_k|)`, `φ_k = Arg a_k − Arg b_k`,
/// and the bottom pair `(a_0, b_0)` is orthogonal to it. In floating point
/// either pair may be tiny, so the rotation is the one minimizing both dropped
/// entries at once, which also covers `P`, `Q` of degree below `d`. Each
/// dropped entry must stay below `tol · max|coeff|`.
pub fn compute_angles(p: &LaurentPoly, q: &LaurentPoly, tol: f64) -> Result<GqspAngles> {
    if p.min_degree() != 0 || q.min_degree() != 0 {
        return Err(GqspError::InvalidArgument(
            "angle computation needs ordinary polynomials (min_degree 0); use k_negative for Laurent targets".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(GqspError::InvalidArgument(
            "tolerance must be positive".into(),
        ));
    }
    let d = p.span().max(q.span());
    let mut top: Vec<Complex64> = p.coeffs().to_vec();
    let mut bot: Vec<Complex64> = q.coeffs().to_vec();
    top.resize(d + 1, ZERO);
    bot.resize(d + 1, ZERO);

    let grid = (8 * (d + 1)).next_power_of_two().max(16);
    let deviation = validate_completion(&top, &bot, grid)?;
    if deviation > tol {
        return Err(GqspError::InvalidPair(format!(
            "max | |P|^2 + |Q|^2 - 1 | = {deviation:.3e} exceeds {tol:.1e}"
        )));
    }

    let mut theta = vec![0.0; d + 1];
    let mut phi = vec![0.0; d + 1];
    for k in (1..=d).rev() {
        let max_coeff = top.iter().chain(&bot).map(|c| c.norm()).fold(0.0, f64::max);
        let (ak, bk) = (top[k], bot[k]);
        let (a0, b0) = (top[0], bot[0]);
        // The exact rotation maps (a_k, b_k) onto (e^{iφ}c, s) and (a_0, b_0)
        // onto its orthogonal complement. Both pairs can be tiny or polluted
        // by rounding, so take the unit vector v maximizing
        // |v·x|² − |v·y|², the top eigenvector of x x† − y y†.
        let m00 = ak.norm_sqr() - a0.norm_sqr();
        let m11 = bk.norm_sqr() - b0.norm_sqr();
        let m01 = ak * bk.conj() - a0 * b0.conj();
        let mu = 0.5 * (m00 + m11) + (0.25 * (m00 - m11).powi(2) + m01.norm_sqr()).sqrt();
        let (v1, v2) = if m00 >= m11 {
            (Complex64::new(mu - m11, 0.0), m01.conj())
        } else {
            (m01, Complex64::new(mu - m00, 0.0))
        };
        let (t, f) = if v1.norm() + v2.norm() > 0.0 {
            (v2.norm().atan2(v1.norm()), arg(v1) - arg(v2))
        } else {
            (0.0, 0.0)
        };
        let f = wrap(f);
        theta[k] = t;
        phi[k] = f;

        // Apply R(θ, φ, 0)^† then A^†: shift P down a degree.
        let (c, s) = (t.cos(), t.sin());
        let e = Complex64::from_polar(1.0, -f);
        let new_top: Vec<Complex64> = top
            .iter()
            .zip(&bot)
            .map(|(&x, &y)| e * c * x + y * s)
            .collect();
        let new_bot: Vec<Complex64> = top
            .iter()
            .zip(&bot)
            .map(|(&x, &y)| e * s * x - y * c)
            .collect();
        let dropped = new_top[0].norm().max(new_bot[k].norm());
        if dropped > tol * max_coeff {
            return Err(GqspError::InvalidPair(format!(
                "cancellation failed at degree {k}: dropped coefficient {dropped:.3e} vs threshold {:.3e}",
                tol * max_coeff
            )));
        }
        top = new_top[1..=k].to_vec();
        bot = new_bot[..k].to_vec();
    }

    let (a, b) = (top[0], bot[0]);
    if (a.norm_sqr() + b.norm_sqr() - 1.0).abs() > tol {
        return Err(GqspError::InvalidPair(format!(
            "base case |a|^2 + |b|^2 = {} is not 1",
            a.norm_sqr() + b.norm_sqr()
        )));
    }
    theta[0] = b.norm().atan2(a.norm());
    phi[0] = wrap(arg(a) - arg(b));
    let lambda = wrap(arg(b));
    Ok(GqspAngles { theta, phi, lambda })
}

/// Forward recursion: the `(P, Q)` realized by the angle sequence.
pub fn reconstruct_polynomials(angles: &GqspAngles) -> Result<(LaurentPoly, LaurentPoly)> {
    angles.validate()?;
    let (t0, f0, l) = (angles.theta[0], angles.phi[0], angles.lambda);
    let mut p = vec![Complex64::from_polar(t0.cos(), l + f0)];
    let mut q = vec![Complex64::from_polar(t0.sin(), l)];
    for (&t, &f) in angles.theta.iter().zip(&angles.phi).skip(1) {
        let (c, s) = (t.cos(), t.sin());
        let e = Complex64::from_polar(1.0, f);
        let n = p.len();
        let mut np = vec![ZERO; n + 1];
        let mut nq = vec![ZERO; n + 1];
        // U P̂ contributes at degree j + 1, Q̂ at degree j.
        for j in 0..n {
            np[j + 1] += e * c * p[j];
            nq[j + 1] += p[j] * s;
            np[j] += e * s * q[j];
            nq[j] -= q[j] * c;
        }
        p = np;
        q = nq;
    }
    Ok((LaurentPoly::from_coeffs(p)?, LaurentPoly::from_coeffs(q)?))
}

/// Gate list `R_0, A, R_1, A, …, R_d` with the last `k_negative` signal
/// slots replaced by the conjugate signal operator; the top-left block then
/// holds `U^{-k} P(U)`.
pub fn plan_circuit(angles: &GqspAngles, k_negative: usize) -> Result<CircuitPlan> {
    angles.validate()?;
    let d = angles.degree();
    if k_negative > d {
        return Err(GqspError::InvalidArgument(format!(
            "k_negative = {k_negative} exceeds degree {d}"
        )));
    }
    let mut gates = Vec::with_capacity(2 * d + 1);
    gates.push(Gate::Rotation {
        theta: angles.theta[0],
        phi: angles.phi[0],
        lambda: angles.lambda,
    });
    for j in 1..=d {
        gates.push(if j > d - k_negative {
            Gate::SignalUdg
        } else {
            Gate::SignalU
        });
        gates.push(Gate::Rotation {
            theta: angles.theta[j],
            phi: angles.phi[j],
            lambda: 0.0,
        });
    }
    CircuitPlan::new(gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_angles, random_angles_iid};
    use rand::SeedableRng;
    use std::f64::consts::FRAC_PI_4;

    fn real(v: &[f64]) -> LaurentPoly {
        LaurentPoly::from_real(v).unwrap()
    }

    fn max_diff(a: &LaurentPoly, b: &LaurentPoly) -> f64 {
        let n = a.coeffs().len().max(b.coeffs().len()) as i64;
        (0..n)
            .map(|k| (a.coeff(k) - b.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn monomial_gives_zero_angles() {
        for d in 0..5 {
            let mut c = vec![0.0; d + 1];
            c[d] = 1.0;
            let angles =
                compute_angles(&real(&c), &real(&vec![0.0; d + 1]), DEFAULT_ANGLE_TOL).unwrap();
            assert_eq!(angles.theta, vec![0.0; d + 1]);
            assert_eq!(angles.phi, vec![0.0; d + 1]);
            assert_eq!(angles.lambda, 0.0);
            let (p, q) = reconstruct_polynomials(&angles).unwrap();
            assert!(max_diff(&p, &real(&c)) < 1e-15);
            assert!(q.max_abs_coeff() < 1e-15);
        }
    }

    #[test]
    fn half_sum_pair() {
        let angles =
            compute_angles(&real(&[0.5, 0.5]), &real(&[-0.5, 0.5]), DEFAULT_ANGLE_TOL).unwrap();
        for (x, y) in angles.theta.iter().zip([FRAC_PI_4, FRAC_PI_4]) {
            assert!((x - y).abs() < 1e-15);
        }
        assert!(angles.phi.iter().all(|x| x.abs() < 1e-15));
        assert!(angles.lambda.abs() < 1e-15);
    }

    #[test]
    fn constant_pair() {
        let angles = compute_angles(&real(&[0.6]), &real(&[0.8]), DEFAULT_ANGLE_TOL).unwrap();
        assert!((angles.theta[0] - 0.8f64.atan2(0.6)).abs() < 1e-15);
        assert_eq!(angles.phi, vec![0.0]);
        assert_eq!(angles.lambda, 0.0);
    }

    #[test]
    fn reconstruct_examples() {
        let (p, q) = reconstruct_polynomials(&GqspAngles {
            theta: vec![0.0],
            phi: vec![0.0],
            lambda: 0.0,
        })
        .unwrap();
        assert_eq!(p, real(&[1.0]));
        assert_eq!(q, real(&[0.0]));
        let (p, q) = reconstruct_polynomials(&GqspAngles {
            theta: vec![FRAC_PI_4, FRAC_PI_4],
            phi: vec![0.0, 0.0],
            lambda: 0.0,
        })
        .unwrap();
        assert!(max_diff(&p, &real(&[0.5, 0.5])) < 1e-15);
        assert!(max_diff(&q, &real(&[-0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn random_angles_give_unit_norm_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let angles = random_angles(64, &mut rng);
        let (p, q) = reconstruct_polynomials(&angles).unwrap();
        assert_eq!(p.coeffs().len(), 65);
        let dev = validate_completion(p.coeffs(), q.coeffs(), 1024).unwrap();
        assert!(dev <= 1e-12, "{dev}");
    }

    #[test]
    fn round_trip_recovers_angles_and_coefficients() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for d in [1, 3, 16, 64, 256] {
            let angles = random_angles(d, &mut rng);
            let (p, q) = reconstruct_polynomials(&angles).unwrap();
            let back = compute_angles(&p, &q, DEFAULT_ANGLE_TOL).unwrap();
            assert_eq!(back.theta.len(), d + 1);
            for k in 0..=d {
                assert!((back.theta[k] - angles.theta[k]).abs() < 1e-9, "theta[{k}]");
                assert!(wrap(back.phi[k] - angles.phi[k]).abs() < 1e-9, "phi[{k}]");
            }
            assert!(wrap(back.lambda - angles.lambda).abs() < 1e-9);
            let (p2, q2) = reconstruct_polynomials(&back).unwrap();
            assert!(max_diff(&p, &p2) < 1e-10 && max_diff(&q, &q2) < 1e-10);
        }
    }

    #[test]
    fn ill_conditioned_pairs_fail_loudly() {
        // iid angles make the extreme coefficients exponentially small; the
        // result is either accurate or an explicit invalid-pair error.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let mut rejected = 0;
        for _ in 0..10 {
            let (p, q) = reconstruct_polynomials(&random_angles_iid(64, &mut rng)).unwrap();
            match compute_angles(&p, &q, DEFAULT_ANGLE_TOL) {
                Ok(back) => {
                    let (p2, q2) = reconstruct_polynomials(&back).unwrap();
                    assert!(max_diff(&p, &p2) < 1e-6 && max_diff(&q, &q2) < 1e-6);
                }
                Err(GqspError::InvalidPair(_)) => rejected += 1,
                Err(e) => panic!("unexpected error {e}"),
            }
        }
        assert!(rejected > 0);
    }

    #[test]
    fn lower_degree_pairs_are_padded() {
        // P = 1 with declared degree 2: both top coefficients vanish.
        let p = real(&[1.0, 0.0, 0.0]);
        let q = real(&[0.0, 0.0, 0.0]);
        let angles = compute_angles(&p, &q, DEFAULT_ANGLE_TOL).unwrap();
        assert_eq!(angles.theta.len(), 3);
        let (p2, q2) = reconstruct_polynomials(&angles).unwrap();
        assert!(max_diff(&p, &p2) < 1e-14 && max_diff(&q, &q2) < 1e-14);

        // Q of lower degree than P.
        let p = real(&[0.0, 0.6, 0.0]);
        let q = real(&[0.8]);
        let angles = compute_angles(&p, &q, DEFAULT_ANGLE_TOL).unwrap();
        assert_eq!(angles.theta.len(), 3);
        let (p2, q2) = reconstruct_polynomials(&angles).unwrap();
        assert!(max_diff(&p, &p2) < 1e-14 && max_diff(&q, &q2) < 1e-14);
    }

    #[test]
    fn perturbed_pairs_are_rejected() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for d in [2, 5, 20] {
            let (p, q) = reconstruct_polynomials(&random_angles(d, &mut rng)).unwrap();
            let mut c = q.coeffs().to_vec();
            c[d / 2] += Complex64::new(1e-3, 0.0);
            let bad = LaurentPoly::from_coeffs(c).unwrap();
            assert!(matches!(
                compute_angles(&p, &bad, DEFAULT_ANGLE_TOL),
                Err(GqspError::InvalidPair(_))
            ));
        }
    }

    #[test]
    fn rejects_laurent_inputs() {
        let p = LaurentPoly::new(vec![Complex64::new(1.0, 0.0)], -1).unwrap();
        assert!(compute_angles(&p, &real(&[0.0]), DEFAULT_ANGLE_TOL).is_err());
    }

    #[test]
    fn plan_shapes() {
        let angles = GqspAngles {
            theta: vec![0.1],
            phi: vec![0.2],
            lambda: 0.3,
        };
        let plan = plan_circuit(&angles, 0).unwrap();
        assert_eq!(
            plan.gates(),
            &[Gate::Rotation {
                theta: 0.1,
                phi: 0.2,
                lambda: 0.3
            }]
        );

        let angles = GqspAngles {
            theta: vec![0.1, 0.2, 0.3],
            phi: vec![0.0; 3],
            lambda: 0.5,
        };
        let kinds = |k| -> Vec<&'static str> {
            plan_circuit(&angles, k)
                .unwrap()
                .gates()
                .iter()
                .map(Gate::kind)
                .collect()
        };
        assert_eq!(
            kinds(0),
            ["rotation", "signal", "rotation", "signal", "rotation"]
        );
        assert_eq!(
            kinds(1),
            ["rotation", "signal", "rotation", "signal_dag", "rotation"]
        );
        assert_eq!(
            kinds(2),
            [
                "rotation",
                "signal_dag",
                "rotation",
                "signal_dag",
                "rotation"
            ]
        );
        assert!(plan_circuit(&angles, 3).is_err());
    }

    #[test]
    fn angles_json_shape() {
        let a = GqspAngles {
            theta: vec![0.5],
            phi: vec![0.25],
            lambda: -1.0,
        };
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            r#"{"theta":[0.5],"phi":[0.25],"lambda":-1.0}"#
        );
    }
}
