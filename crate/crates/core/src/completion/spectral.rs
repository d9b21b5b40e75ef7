//! Minimum-phase complement by spectral factorization.
//!
//! `log|Q|` is fixed by `|Q|² = 1 − |P|²`; the complement with no zeros in the
//! open unit disk has `log Q` analytic there, so its phase is the harmonic
//! conjugate of `log|Q|`. On an `L`-point grid that is one FFT of
//! `½ log(1 − |P|²)`, a causal fold, an exponential and one more FFT. The
//! truncation to degree `d` is exact up to aliasing of the cepstrum, which
//! decays geometrically in `L`; an L-BFGS polish on the convolution objective
//! removes what is left.
//!
//! Peeling rotation angles off this complement stays accurate at high degree,
//! whereas a complement with an arbitrary mix of root placements can amplify
//! rounding by many orders of magnitude.

use std::time::Instant;

use num_complex::Complex64;

use super::{check_admissible, lbfgs, CompletionConfig, CompletionProblem, CompletionReport};
use crate::error::{GqspError, Result};
use crate::fft;

/// Largest grid tried before handing over to the polish.
pub const MAX_SPECTRAL_GRID: usize = 1 << 22;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Degree-`d` truncation of the minimum-phase factor of `1 − |P|²` sampled on
/// `grid` points.
pub fn spectral_factor(a: &[Complex64], grid: usize) -> Result<Vec<Complex64>> {
    let n = a.len();
    if n == 0 {
        return Err(GqspError::InvalidArgument(
            "target coefficients are empty".into(),
        ));
    }
    if grid < 2 * n || !grid.is_power_of_two() {
        return Err(GqspError::InvalidArgument(format!(
            "grid must be a power of two at least {}, got {grid}",
            2 * n
        )));
    }
    let mut buf = fft::padded(a, grid);
    fft::inverse(&mut buf);
    let mut logs: Vec<Complex64> = buf
        .iter()
        .map(|p| Complex64::new(0.5 * (1.0 - p.norm_sqr()).max(f64::MIN_POSITIVE).ln(), 0.0))
        .collect();
    fft::forward(&mut logs);
    let scale = 1.0 / grid as f64;
    let half = grid / 2;
    for (k, c) in logs.iter_mut().enumerate() {
        *c *= if k == 0 || k == half {
            scale
        } else if k < half {
            2.0 * scale
        } else {
            0.0
        };
    }
    fft::inverse(&mut logs);
    let mut q: Vec<Complex64> = logs.iter().map(|c| c.exp()).collect();
    fft::forward(&mut q);
    q.truncate(n);
    q.iter_mut().for_each(|c| *c *= scale);
    Ok(q)
}

/// Complement with no zeros inside the unit disk, refined to the tolerances
/// of `cfg`. The grid starts at `64·(d+1)` and doubles while the objective
/// keeps dropping; L-BFGS then polishes from the best factor.
pub fn complete_min_phase(
    a: &[Complex64],
    cfg: &CompletionConfig,
) -> Result<(Vec<Complex64>, CompletionReport)> {
    cfg.validate()?;
    if a.is_empty() {
        return Err(GqspError::InvalidArgument(
            "target coefficients are empty".into(),
        ));
    }
    check_admissible(a)?;
    let start = Instant::now();
    let problem = CompletionProblem::new(a)?;

    let mut grid = (64 * a.len()).next_power_of_two().max(1024);
    let mut best = spectral_factor(a, grid)?;
    let mut best_f = problem.objective(&best)?;
    while best_f > cfg.objective_tol && grid < MAX_SPECTRAL_GRID {
        grid *= 2;
        let b = spectral_factor(a, grid)?;
        let f = problem.objective(&b)?;
        if !(f < 0.5 * best_f) {
            if f < best_f {
                best = b;
                best_f = f;
            }
            break;
        }
        best = b;
        best_f = f;
    }

    let mut iterations = 0;
    let mut grad = vec![ZERO; a.len()];
    if best_f > cfg.objective_tol {
        let settings = lbfgs::Settings {
            memory: cfg.memory,
            max_iters: cfg.max_iters,
            f_tol: cfg.objective_tol,
            g_tol: cfg.grad_tol,
            deadline: cfg.time_limit.map(|t| start + t),
        };
        let out = lbfgs::minimize(
            |x, g| {
                problem
                    .objective_and_gradient(x, g)
                    .expect("lengths fixed by construction")
            },
            best.clone(),
            &settings,
        );
        iterations = out.iterations;
        if out.f < best_f {
            best = out.x;
            best_f = out.f;
        }
    }
    problem.objective_and_gradient(&best, &mut grad)?;
    let grad_norm = grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
    let report = CompletionReport {
        final_objective: best_f,
        iterations,
        grad_norm,
        wall_time: start.elapsed().as_secs_f64(),
        restarts_used: 1,
    };
    Ok((best, report))
}
