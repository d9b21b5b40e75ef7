//! Root-finding construction of the complementary polynomial.
//!
//! `H(θ) = 1 − |P(e^{iθ})|² = e^{−idθ} R(e^{iθ})` where `R` has degree `2d`
//! and is self-inversive: its roots sit on the unit circle with even
//! multiplicity or in pairs `(w, 1/w*)`. Taking one root per pair (and one per
//! unit-circle double root) gives `Q` up to a scalar, which is fixed by
//! matching the mean of `H`, i.e. `‖q‖² = 1 − ‖a‖²`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{GqspError, Result};
use crate::poly::{autocorrelation, default_grid_size, sup_norm_sq, LaurentPoly};

/// Largest degree accepted by [`complete_via_roots`].
pub const ROOT_ORACLE_MAX_DEGREE: usize = 32;

/// Roots with `|ln|w|| <` this are treated as lying on the unit circle.
pub const UNIT_CIRCLE_LOG_TOL: f64 = 1e-7;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// All roots of `sum_j coeffs[j] z^j` (ascending order) as eigenvalues of the
/// companion matrix. Leading zeros are the caller's problem.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let mut companion = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = ONE;
    }
    for i in 0..n {
        companion[(i, n - 1)] = -coeffs[i] / lead;
    }
    companion
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .copied()
        .collect()
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// A few guarded Newton steps; only kept while `|R(w)|` decreases.
fn polish(coeffs: &[Complex64], mut w: Complex64) -> Complex64 {
    let (mut val, mut deriv) = horner(coeffs, w);
    for _ in 0..4 {
        if deriv.norm() == 0.0 {
            break;
        }
        let next = w - val / deriv;
        let (nv, nd) = horner(coeffs, next);
        if nv.norm() >= val.norm() {
            break;
        }
        w = next;
        val = nv;
        deriv = nd;
    }
    w
}

/// Complementary coefficients `b` with `|Q|² = 1 − |P|²` on the unit circle.
pub fn complete_via_roots(a: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.is_empty() {
        return Err(GqspError::InvalidArgument(
            "target coefficients are empty".into(),
        ));
    }
    let d = a.len() - 1;
    if d > ROOT_ORACLE_MAX_DEGREE {
        return Err(GqspError::Unsupported(format!(
            "root-finding completion is limited to degree {ROOT_ORACLE_MAX_DEGREE}, got {d}"
        )));
    }
    let p = LaurentPoly::from_coeffs(a.to_vec())?;
    let sup = sup_norm_sq(&p, default_grid_size(&p))?;
    if sup > 1.0 + 1e-9 {
        return Err(GqspError::Inadmissible { sup_norm_sq: sup });
    }

    // h[j] is the coefficient of e^{i(j-d)θ} in H.
    let mut h: Vec<Complex64> = autocorrelation(a)?.iter().map(|c| -c).collect();
    h[d] += ONE;
    let mean = h[d].re;
    let scale = h.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale <= 1e-14 || mean <= 0.0 {
        return Ok(vec![ZERO; d + 1]);
    }

    let tiny = 1e-14 * scale;
    let lo = h.iter().position(|c| c.norm() > tiny).unwrap();
    let hi = h.iter().rposition(|c| c.norm() > tiny).unwrap();
    // H is Hermitian, so `lo` zeros at the origin mirror `2d - hi` at infinity.
    let zeros_at_origin = lo.min(2 * d - hi);
    let reduced = &h[lo..=hi];

    let mut unit = Vec::new();
    let mut chosen = vec![ZERO; zeros_at_origin];
    for w in polynomial_roots(reduced) {
        let log_mod = w.norm().ln();
        if log_mod.abs() < UNIT_CIRCLE_LOG_TOL {
            unit.push(w);
        } else if log_mod < 0.0 {
            chosen.push(polish(reduced, w));
        }
    }

    // Unit-circle roots come in (numerically split) double pairs.
    if unit.len() % 2 != 0 {
        return Err(GqspError::NumericalDegeneracy(format!(
            "{} roots on the unit circle cannot be paired into double roots",
            unit.len()
        )));
    }
    while let Some(w) = unit.pop() {
        let (k, _) = unit
            .iter()
            .enumerate()
            .map(|(k, v)| (k, (v - w).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("even count guarantees a partner");
        let partner = unit.swap_remove(k);
        let mid = (w + partner) * 0.5;
        chosen.push(mid / mid.norm());
    }

    if chosen.len() != d {
        return Err(GqspError::NumericalDegeneracy(format!(
            "expected {d} representative roots, found {}",
            chosen.len()
        )));
    }

    let mut q = vec![ONE];
    for w in &chosen {
        let mut next = vec![ZERO; q.len() + 1];
        for (j, &c) in q.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * w;
        }
        q = next;
    }
    let norm_sq: f64 = q.iter().map(|c| c.norm_sqr()).sum();
    let c = (mean / norm_sq).sqrt();
    Ok(q.into_iter().map(|x| x * c).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::validate_completion;
    use crate::sampling::random_admissible_poly;
    use rand::SeedableRng;
    use std::f64::consts::PI;

    fn real(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn companion_roots_of_known_polynomial() {
        // (z - 1)(z - 2)(z + i) = z^3 + (-3 + i) z^2 + (2 - 3i) z + 2i
        let coeffs = vec![
            Complex64::new(0.0, 2.0),
            Complex64::new(2.0, -3.0),
            Complex64::new(-3.0, 1.0),
            ONE,
        ];
        let mut roots = polynomial_roots(&coeffs);
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let expected = [Complex64::new(0.0, -1.0), ONE, Complex64::new(2.0, 0.0)];
        for (r, e) in roots.iter().zip(&expected) {
            assert!((r - e).norm() < 1e-12, "{r} vs {e}");
        }
    }

    #[test]
    fn trivial_target() {
        assert_eq!(complete_via_roots(&real(&[1.0])).unwrap(), real(&[0.0]));
    }

    #[test]
    fn half_sum_target_gives_sine() {
        let b = complete_via_roots(&real(&[0.5, 0.5])).unwrap();
        let q = LaurentPoly::from_coeffs(b.clone()).unwrap();
        for k in 0..1024 {
            let t = 2.0 * PI * k as f64 / 1024.0;
            let want = (t / 2.0).sin().powi(2);
            assert!((q.eval(t).norm_sqr() - want).abs() < 1e-8);
        }
        // Up to phase this is ±[1/2, -1/2].
        assert!((b[0].norm() - 0.5).abs() < 1e-8 && (b[1].norm() - 0.5).abs() < 1e-8);
    }

    #[test]
    fn constant_complement() {
        let b = complete_via_roots(&real(&[0.0, 0.8])).unwrap();
        assert_eq!(b.len(), 2);
        let q = LaurentPoly::from_coeffs(b).unwrap();
        for k in 0..64 {
            let t = 0.1 * k as f64;
            assert!((q.eval(t).norm_sqr() - 0.36).abs() < 1e-12);
        }
    }

    #[test]
    fn random_targets_complete() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for d in [1, 2, 5, 16, 32] {
            let p = random_admissible_poly(d, 0.99, false, &mut rng);
            let b = complete_via_roots(p.coeffs()).unwrap();
            assert_eq!(b.len(), d + 1);
            let dev = validate_completion(p.coeffs(), &b, 4096).unwrap();
            assert!(dev < 1e-8, "d={d}: {dev}");
        }
    }

    #[test]
    fn degree_limit_and_admissibility() {
        let long = vec![Complex64::new(0.01, 0.0); ROOT_ORACLE_MAX_DEGREE + 2];
        assert!(matches!(
            complete_via_roots(&long),
            Err(GqspError::Unsupported(_))
        ));
        assert!(matches!(
            complete_via_roots(&real(&[1.0, 0.5])),
            Err(GqspError::Inadmissible { .. })
        ));
    }
}
