//! Thin wrapper over `rustfft` with a per-thread planner cache.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn forward_plan(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(len))
}

pub(crate) fn inverse_plan(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(len))
}

/// In-place forward transform, `X_k = sum_n x_n e^{-2 pi i k n / L}`.
pub(crate) fn forward(buf: &mut [Complex64]) {
    if buf.len() > 1 {
        forward_plan(buf.len()).process(buf);
    }
}

/// In-place unnormalized inverse transform, `x_n = sum_k X_k e^{+2 pi i k n / L}`.
pub(crate) fn inverse(buf: &mut [Complex64]) {
    if buf.len() > 1 {
        inverse_plan(buf.len()).process(buf);
    }
}

/// Zero-padded copy of `src` with length `len`.
pub(crate) fn padded(src: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    out[..src.len()].copy_from_slice(src);
    out
}

/// Smallest `2^a 3^b 5^c` that is at least `n`.
pub(crate) fn good_len(n: usize) -> usize {
    let mut best = n.max(1).next_power_of_two();
    let mut p5 = 1;
    while p5 < best {
        let mut p35 = p5;
        while p35 < best {
            let mut m = p35;
            while m < n {
                m *= 2;
            }
            best = best.min(m);
            p35 *= 3;
        }
        p5 *= 5;
    }
    best
}
