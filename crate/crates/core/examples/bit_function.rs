//! Diagonal operator |x⟩ ↦ (1 + e^{2πix/N})/2 |x⟩ on three qubits.

use gqsp::completion::CompletionStrategy;
use gqsp::transforms::diagonal::bit_function_filter;
use gqsp::transforms::synth_diagonal;
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() -> gqsp::Result<()> {
    let syn = synth_diagonal(&bit_function_filter(), 3, &CompletionStrategy::default())?;
    println!("signal phase gates: {:?}", syn.signal.phases);
    println!("scale {}", syn.scale());
    for (x, got) in syn.diagonal()?.iter().enumerate() {
        let want = (Complex64::new(1.0, 0.0)
            + Complex64::from_polar(1.0, 2.0 * PI * x as f64 / 8.0))
            / 2.0;
        println!("x = {x}: {got:.6}  (|error| {:.1e})", (got - want).norm());
    }
    Ok(())
}
