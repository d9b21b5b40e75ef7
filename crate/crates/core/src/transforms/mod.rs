//! Targets for concrete operators: Hamiltonian-simulation phases via
//! Jacobi-Anger, Fourier fits of smooth functions, diagonal operators and
//! circulant (convolution) operators.

pub mod bessel;
pub mod circulant;
pub mod diagonal;
pub mod fourier_fit;
pub mod jacobi_anger;

pub use bessel::{bessel_j, bessel_j_all, truncation_order};
pub use circulant::{
    circular_convolve_bruteforce, cyclic_permutation_matrix, qft_matrix, synth_circulant,
    CirculantSpec, CirculantSynthesis,
};
pub use diagonal::{synth_diagonal, synth_root_of_unity_plan, DiagonalSynthesis, PhaseGateList};
pub use fourier_fit::{fit_fourier_series, named_function, FourierFit, FourierFitConfig};
pub use jacobi_anger::{
    jacobi_anger, jacobi_anger_cos, jacobi_anger_sin, realize_trig_phase, TrigKind,
};
