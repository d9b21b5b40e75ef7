//! Seeded random instances: polynomials, angle sets and unitaries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::angles::GqspAngles;
use crate::poly::{sup_norm_sq, LaurentPoly};

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Degree-`d` polynomial with i.i.d. Gaussian coefficients, rescaled so the
/// grid supremum of `|P|` equals `sup_norm` (grid density 16 (d + 1)).
pub fn random_admissible_poly<R: Rng + ?Sized>(
    d: usize,
    sup_norm: f64,
    real: bool,
    rng: &mut R,
) -> LaurentPoly {
    let coeffs: Vec<Complex64> = (0..=d)
        .map(|_| {
            let z = gaussian_complex(rng);
            if real {
                Complex64::new(z.re, 0.0)
            } else {
                z
            }
        })
        .collect();
    let p = LaurentPoly::from_coeffs(coeffs).expect("gaussian samples are finite");
    let m = (16 * (d + 1)).next_power_of_two();
    let peak = sup_norm_sq(&p, m).expect("grid size is positive").sqrt();
    p.scaled(Complex64::new(sup_norm / peak, 0.0))
}

/// Random angle set of degree `d` with `θ_k` uniform in
/// `[0, π/(2√(d+1)))` and phases uniform in `[-π, π)`.
///
/// Keeping the total rotation `Σθ_k` of order one avoids pairs whose extreme
/// coefficients are exponentially small; see [`random_angles_iid`].
pub fn random_angles<R: Rng + ?Sized>(d: usize, rng: &mut R) -> GqspAngles {
    random_angles_with(
        d,
        std::f64::consts::FRAC_PI_2 / ((d + 1) as f64).sqrt(),
        rng,
    )
}

/// Random angle set with `θ_k` uniform in `[0, π/2)`.
///
/// For large `d` the resulting `P` has coefficients of size `∏ cos θ_k` at
/// both ends, so peeling layers amplifies rounding by the inverse of those
/// and [`crate::compute_angles`] usually reports an invalid pair past
/// `d ≈ 32`.
pub fn random_angles_iid<R: Rng + ?Sized>(d: usize, rng: &mut R) -> GqspAngles {
    random_angles_with(d, std::f64::consts::FRAC_PI_2, rng)
}

fn random_angles_with<R: Rng + ?Sized>(d: usize, theta_max: f64, rng: &mut R) -> GqspAngles {
    use std::f64::consts::PI;
    GqspAngles {
        theta: (0..=d).map(|_| rng.random_range(0.0..theta_max)).collect(),
        phi: (0..=d).map(|_| rng.random_range(-PI..PI)).collect(),
        lambda: rng.random_range(-PI..PI),
    }
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// phases of `diag(R)` folded back into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| gaussian_complex(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random Hermitian matrix with entries of unit scale.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| gaussian_complex(rng));
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}
