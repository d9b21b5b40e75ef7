//! Angles → (P, Q) → angles.

use gqsp::angles::{compute_angles, reconstruct_polynomials, DEFAULT_ANGLE_TOL};
use gqsp::sampling::random_angles;
use rand::SeedableRng;

fn main() -> gqsp::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for d in [1usize, 8, 64, 256] {
        let angles = random_angles(d, &mut rng);
        let (p, q) = reconstruct_polynomials(&angles)?;
        let again = compute_angles(&p, &q, DEFAULT_ANGLE_TOL)?;
        let (p2, q2) = reconstruct_polynomials(&again)?;
        let err = p
            .coeffs()
            .iter()
            .zip(p2.coeffs())
            .chain(q.coeffs().iter().zip(q2.coeffs()))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        println!("d = {d:3}: max coefficient error after round trip {err:.2e}");
    }
    Ok(())
}
