//! e^{it cos H} from the Jacobi-Anger expansion, compared with the
//! eigendecomposition.

use gqsp::circuit::simulate;
use gqsp::completion::CompletionStrategy;
use gqsp::sampling::random_hermitian;
use gqsp::transforms::{realize_trig_phase, TrigKind};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;

fn main() -> gqsp::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
    let h = random_hermitian(8, &mut rng);
    let eig = h.symmetric_eigen();
    let v = &eig.eigenvectors;
    let apply = |f: &dyn Fn(f64) -> Complex64| -> DMatrix<Complex64> {
        v * DMatrix::from_diagonal(&eig.eigenvalues.map(f)) * v.adjoint()
    };
    let u = apply(&|x| Complex64::new(0.0, x).exp());

    for t in [1.0, 5.0, 10.0] {
        let r = realize_trig_phase(TrigKind::Cos, t, 1e-8, &CompletionStrategy::default())?;
        let block = simulate(&r.plan, &u)?.top_left * Complex64::new(r.scale, 0.0);
        let exact = apply(&|x| Complex64::new(0.0, t * x.cos()).exp());
        let err = (block - exact).iter().map(|z| z.norm()).fold(0.0, f64::max);
        println!(
            "t = {t:4}: degree {:3}, scale − 1 = {:.1e}, max entry error {err:.2e}",
            r.plan.degree(),
            r.scale - 1.0
        );
    }
    Ok(())
}
