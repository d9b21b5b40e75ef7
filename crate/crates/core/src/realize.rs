//! Target polynomial to gate sequence: scale, complete, peel angles, lay out.
//!
//! Laurent targets `Σ_{n ≥ -k} c_n z^n` are shifted by `z^k` before
//! completion and realized with `k` conjugate signal operators, so the top-left
//! block of the plan is `P(U) / scale` with the original negative powers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angles::{compute_angles, plan_circuit, GqspAngles, DEFAULT_ANGLE_TOL};
use crate::circuit::CircuitPlan;
use crate::completion::{complete, CompletionReport, CompletionStrategy};
use crate::error::{GqspError, Result};
use crate::poly::{sup_norm_sq_refined, LaurentPoly};

/// Relative guard added to the supremum before dividing.
pub const SCALE_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Realization {
    pub plan: CircuitPlan,
    pub angles: GqspAngles,
    /// Complement of the shifted, scaled target.
    pub q: LaurentPoly,
    pub scale: f64,
    pub report: Option<CompletionReport>,
}

/// `√sup|P|²` with a small guard, or exactly 1 when `P` is bounded by 1 up
/// to the guard.
pub fn admissible_scale(p: &LaurentPoly) -> f64 {
    let sup = sup_norm_sq_refined(p);
    if sup <= 1.0 + SCALE_GUARD {
        1.0
    } else {
        (sup * (1.0 + SCALE_GUARD)).sqrt()
    }
}

/// `(k, a)` with `a` the coefficients of `z^k · target / scale` from `z^0`
/// upward and `k` the number of negative powers.
pub fn shifted_coefficients(target: &LaurentPoly, scale: f64) -> Result<(usize, Vec<Complex64>)> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(GqspError::InvalidArgument(format!(
            "scale must be positive and finite, got {scale}"
        )));
    }
    let k = (-target.min_degree()).max(0) as usize;
    let shifted = target.shifted(k as i64);
    // Powers below z^0 are gone after the shift; a positive lowest power stays.
    let mut a: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); shifted.min_degree() as usize];
    a.extend(shifted.coeffs().iter().map(|c| c / scale));
    Ok((k, a))
}

/// Realizes `target / scale`.
pub fn realize(
    target: &LaurentPoly,
    scale: f64,
    strategy: &CompletionStrategy,
) -> Result<Realization> {
    let (k, a) = shifted_coefficients(target, scale)?;
    let (b, report) = complete(&a, strategy)?;
    let p = LaurentPoly::from_coeffs(a)?;
    let q = LaurentPoly::from_coeffs(b)?;
    let angles = compute_angles(&p, &q, DEFAULT_ANGLE_TOL)?;
    let plan = plan_circuit(&angles, k)?;
    Ok(Realization {
        plan,
        angles,
        q,
        scale,
        report,
    })
}
