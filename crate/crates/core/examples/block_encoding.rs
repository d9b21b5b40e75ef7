//! A Laurent target z^{-3}(…) realized as a circuit and checked against P(U).

use gqsp::circuit::{simulate, verify_block};
use gqsp::completion::CompletionStrategy;
use gqsp::realize::realize;
use gqsp::sampling::{random_admissible_poly, random_unitary};
use gqsp::LaurentPoly;
use rand::SeedableRng;

fn main() -> gqsp::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let base = random_admissible_poly(10, 0.95, false, &mut rng);
    let target = LaurentPoly::new(base.coeffs().to_vec(), -3)?;
    let r = realize(&target, 1.0, &CompletionStrategy::default())?;
    println!(
        "{} gates, degree {}, {} conjugate signal slots",
        r.plan.gates().len(),
        r.plan.degree(),
        r.plan.k_negative()
    );

    let u = random_unitary(8, &mut rng);
    let block = simulate(&r.plan, &u)?;
    println!(
        "unitarity deviation of the 16×16 circuit: {:.2e}",
        block.unitarity_deviation()
    );
    println!(
        "‖TL − P(U)‖_F/√N = {:.2e}",
        verify_block(&r.plan, &u, &target)?
    );
    println!("{}", serde_json::to_string(&r.angles)?);
    Ok(())
}
