//! Fourier fits of e^{it·arcsin x} on [−1/√2, 1/√2] at increasing M.

use gqsp::transforms::{fit_fourier_series, named_function, FourierFitConfig};

fn main() -> gqsp::Result<()> {
    let delta = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
    for spec in ["exp-arcsin:0.5", "exp-sqrt:3"] {
        let f = named_function(spec)?;
        for m in [5, 10, 20, 40] {
            let fit = fit_fourier_series(&*f, &FourierFitConfig::new(m, delta))?;
            let l1: f64 = fit.coeffs.coeffs().iter().map(|c| c.norm()).sum();
            println!(
                "{spec:15} M = {m:2}: max residual {:.2e}, Σ|c_m| = {l1:.3}",
                fit.max_residual
            );
        }
    }
    Ok(())
}
