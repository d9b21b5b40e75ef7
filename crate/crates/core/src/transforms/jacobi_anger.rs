//! Truncated Jacobi-Anger expansions `e^{it cos θ} = Σ i^n J_n(t) e^{inθ}` and
//! `e^{it sin θ} = Σ J_n(t) e^{inθ}`, and their GQSP realization.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bessel::{bessel_j_all, truncation_order};
use crate::completion::CompletionStrategy;
use crate::error::{GqspError, Result};
use crate::poly::LaurentPoly;
use crate::realize::{admissible_scale, realize, Realization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrigKind {
    Cos,
    Sin,
}

impl std::str::FromStr for TrigKind {
    type Err = GqspError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cos" => Ok(TrigKind::Cos),
            "sin" => Ok(TrigKind::Sin),
            other => Err(GqspError::InvalidArgument(format!(
                "unknown kind {other:?}; expected cos or sin"
            ))),
        }
    }
}

fn check(t: f64, eps: f64) -> Result<()> {
    if !(eps > 0.0) {
        return Err(GqspError::InvalidArgument(format!(
            "eps must be positive, got {eps}"
        )));
    }
    if !t.is_finite() {
        return Err(GqspError::InvalidArgument(format!(
            "t must be finite, got {t}"
        )));
    }
    Ok(())
}

/// Powers of `i`.
fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn expansion(kind: TrigKind, t: f64, eps: f64) -> Result<LaurentPoly> {
    check(t, eps)?;
    let order = truncation_order(t, eps);
    let js = bessel_j_all(order, t);
    let n = order as i64;
    let coeffs = (-n..=n)
        .map(|k| {
            // J_{-k} = (-1)^k J_k
            let j = if k < 0 && k % 2 != 0 {
                -js[k.unsigned_abs() as usize]
            } else {
                js[k.unsigned_abs() as usize]
            };
            match kind {
                TrigKind::Cos => i_pow(k) * j,
                TrigKind::Sin => Complex64::new(j, 0.0),
            }
        })
        .collect();
    LaurentPoly::new(coeffs, -n)
}

/// `Σ_{|n| ≤ n'} i^n J_n(t) z^n` with `n' = truncation_order(t, eps)`.
pub fn jacobi_anger_cos(t: f64, eps: f64) -> Result<LaurentPoly> {
    expansion(TrigKind::Cos, t, eps)
}

/// `Σ_{|n| ≤ n'} J_n(t) z^n` with `n' = truncation_order(t, eps)`.
pub fn jacobi_anger_sin(t: f64, eps: f64) -> Result<LaurentPoly> {
    expansion(TrigKind::Sin, t, eps)
}

pub fn jacobi_anger(kind: TrigKind, t: f64, eps: f64) -> Result<LaurentPoly> {
    expansion(kind, t, eps)
}

/// Plan whose top-left block is `e^{it cos H} / scale` (or `sin`) for a
/// signal unitary `U = e^{iH}`, up to the truncation error `eps`. The
/// truncated series can overshoot 1 by about `eps`, so `scale` is `1 + O(eps)`.
pub fn realize_trig_phase(
    kind: TrigKind,
    t: f64,
    eps: f64,
    strategy: &CompletionStrategy,
) -> Result<Realization> {
    let p = jacobi_anger(kind, t, eps)?;
    realize(&p, admissible_scale(&p), strategy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::simulate;
    use crate::sampling::random_hermitian;
    use nalgebra::DMatrix;
    use rand::SeedableRng;
    use std::f64::consts::PI;

    fn grid_error(p: &LaurentPoly, f: impl Fn(f64) -> Complex64) -> f64 {
        (0..1024)
            .map(|k| {
                let th = 2.0 * PI * k as f64 / 1024.0;
                (p.eval(th) - f(th)).norm()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn zero_time_is_identity() {
        for kind in [TrigKind::Cos, TrigKind::Sin] {
            let p = jacobi_anger(kind, 0.0, 1e-8).unwrap();
            assert_eq!(p.min_degree(), 0);
            assert_eq!(p.coeffs(), &[Complex64::new(1.0, 0.0)]);
        }
    }

    #[test]
    fn pointwise_accuracy() {
        for &(t, eps) in &[(1.0, 1e-10), (5.0, 1e-8), (10.0, 1e-8), (-3.0, 1e-9)] {
            let c = jacobi_anger_cos(t, eps).unwrap();
            assert!(grid_error(&c, |th| Complex64::new(0.0, t * th.cos()).exp()) <= eps);
            let s = jacobi_anger_sin(t, eps).unwrap();
            assert!(grid_error(&s, |th| Complex64::new(0.0, t * th.sin()).exp()) <= eps);
        }
        let s = jacobi_anger_sin(2.0, 1e-10).unwrap();
        assert!(grid_error(&s, |th| Complex64::new(0.0, 2.0 * th.sin()).exp()) <= 1e-10);
    }

    #[test]
    fn cos_coefficients_are_symmetric() {
        let p = jacobi_anger_cos(4.0, 1e-12).unwrap();
        let n = -p.min_degree();
        for k in 1..=n {
            assert!((p.coeff(k) - p.coeff(-k)).norm() < 1e-15);
        }
    }

    #[test]
    fn sin_series_sums_to_one() {
        let p = jacobi_anger_sin(7.5, 1e-10).unwrap();
        let s: Complex64 = p.coeffs().iter().sum();
        assert!((s - 1.0).norm() < 1e-10);
    }

    #[test]
    fn realized_block_is_the_matrix_exponential() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let h = random_hermitian(6, &mut rng);
        let eig = h.clone().symmetric_eigen();
        let v = eig.eigenvectors.clone();
        let from_eigs = |f: &dyn Fn(f64) -> Complex64| -> DMatrix<Complex64> {
            let d = DMatrix::from_diagonal(&eig.eigenvalues.map(f));
            &v * d * v.adjoint()
        };
        let u = from_eigs(&|x| Complex64::new(0.0, x).exp());
        for (kind, t) in [(TrigKind::Cos, 2.0), (TrigKind::Sin, 3.0)] {
            let r = realize_trig_phase(kind, t, 1e-9, &CompletionStrategy::default()).unwrap();
            let block = simulate(&r.plan, &u).unwrap().top_left * Complex64::new(r.scale, 0.0);
            let want = from_eigs(&|x| {
                let arg = match kind {
                    TrigKind::Cos => t * x.cos(),
                    TrigKind::Sin => t * x.sin(),
                };
                Complex64::new(0.0, arg).exp()
            });
            let err = (block - want).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 1e-8, "{kind:?}: {err}");
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(jacobi_anger_cos(1.0, 0.0).is_err());
        assert!(jacobi_anger_sin(f64::NAN, 1e-8).is_err());
        assert!("tan".parse::<TrigKind>().is_err());
    }
}
