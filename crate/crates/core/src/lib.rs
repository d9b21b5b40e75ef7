//! Generalized quantum signal processing (GQSP) toolkit.
//!
//! Pipeline: pick a target polynomial `P` bounded by 1 on the unit circle,
//! find a complementary `Q` ([`completion`]), turn `(P, Q)` into rotation
//! angles ([`angles`]), lay them out as a gate sequence and check the block
//! encoding by dense simulation ([`circuit`]). [`transforms`] builds targets
//! for Hamiltonian-simulation phases, diagonal operators and circulant
//! (convolution) operators.

pub mod angles;
pub mod bench;
pub mod circuit;
pub mod cli;
pub mod completion;
pub mod error;
mod fft;
pub mod poly;
pub mod realize;
pub mod sampling;
pub mod transforms;

pub use angles::{compute_angles, plan_circuit, reconstruct_polynomials, GqspAngles};
pub use circuit::{simulate, verify_block, BlockEncoding, CircuitPlan, Gate};
pub use completion::{
    complete_via_optimization, complete_via_roots, CompletionConfig, CompletionReport,
};
pub use error::{GqspError, Result};
pub use poly::LaurentPoly;
