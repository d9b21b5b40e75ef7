//! Complementary polynomial for a random target, by optimization and by roots.

use gqsp::completion::{
    complete_via_optimization, complete_via_roots, validate_completion, CompletionConfig,
};
use gqsp::sampling::random_admissible_poly;
use rand::SeedableRng;

fn main() -> gqsp::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let cfg = CompletionConfig {
        time_limit: Some(std::time::Duration::from_secs(60)),
        ..CompletionConfig::default()
    };
    for d in [8usize, 256, 1024] {
        let p = random_admissible_poly(d, 0.99, false, &mut rng);
        let (b, report) = complete_via_optimization(p.coeffs(), &cfg)?;
        let dev = validate_completion(p.coeffs(), &b, 4 * (2 * d + 1))?;
        println!(
            "d = {d:5}: objective {:.2e} after {} iterations ({:.3} s), max ||P|²+|Q|²−1| = {dev:.2e}",
            report.final_objective, report.iterations, report.wall_time
        );
    }

    // The root construction gives a different Q with the same |Q|.
    let p = random_admissible_poly(12, 0.9, false, &mut rng);
    let (b_opt, _) = complete_via_optimization(p.coeffs(), &CompletionConfig::default())?;
    let b_roots = complete_via_roots(p.coeffs())?;
    let q_opt = gqsp::LaurentPoly::from_coeffs(b_opt)?;
    let q_roots = gqsp::LaurentPoly::from_coeffs(b_roots)?;
    let gap = (0..1024)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 1024.0;
            (q_opt.eval(t).norm_sqr() - q_roots.eval(t).norm_sqr()).abs()
        })
        .fold(0.0, f64::max);
    println!("d = 12: max ||Q_opt|² − |Q_roots|²| = {gap:.2e}");
    Ok(())
}
