//! A 5-tap filter applied to a 16-dimensional state through QFT, a diagonal
//! GQSP block, and the inverse QFT.

use gqsp::completion::CompletionStrategy;
use gqsp::sampling::gaussian_complex;
use gqsp::transforms::{circular_convolve_bruteforce, synth_circulant, CirculantSpec};
use gqsp::LaurentPoly;
use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;

fn main() -> gqsp::Result<()> {
    let filter = LaurentPoly::new(
        [0.1, 0.2, 0.4, 0.2, 0.1]
            .map(|c| Complex64::new(c, 0.0))
            .to_vec(),
        -2,
    )?;
    let spec = CirculantSpec::new(16, filter.clone())?;
    let syn = synth_circulant(&spec, &CompletionStrategy::default())?;
    println!(
        "DFT sign {}, scale {}, {} gates",
        syn.dft_sign,
        syn.scale,
        syn.plan.gates().len()
    );

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
    let x: Vec<Complex64> = (0..16).map(|_| gaussian_complex(&mut rng)).collect();
    let got = syn.apply(&DVector::from_vec(x.clone()))? * Complex64::new(syn.scale, 0.0);
    let want = circular_convolve_bruteforce(&x, &filter);
    let err = got
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!("max |C ψ − ψ ⊛ c| = {err:.2e}");
    Ok(())
}
