//! Complementary polynomials: given `P`, find `Q` of the same degree with
//! `|P|² + |Q|² = 1` on the unit circle.
//!
//! The primary route minimizes the convolution objective of
//! [`completion_objective`] with L-BFGS; [`complete_via_roots`] is the
//! factorization route, exact up to eigenvalue accuracy and limited to small
//! degrees. `Q` is not unique, so only `|Q|²` is comparable between routes.
//! [`complete_min_phase`] picks the complement without zeros in the disk,
//! which is the one to feed into angle computation.

mod lbfgs;
mod objective;
mod roots;
mod spectral;

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GqspError, Result};
use crate::poly::{default_grid_size, eval_grid, sup_norm_sq, LaurentPoly};
use crate::sampling::gaussian_complex;

pub use objective::{completion_gradient, completion_objective, CompletionProblem};
pub use roots::{
    complete_via_roots, polynomial_roots, ROOT_ORACLE_MAX_DEGREE, UNIT_CIRCLE_LOG_TOL,
};
pub use spectral::{complete_min_phase, spectral_factor, MAX_SPECTRAL_GRID};

/// Targets whose grid sup-norm squared exceeds `1 + ADMISSIBILITY_SLACK` are rejected.
pub const ADMISSIBILITY_SLACK: f64 = 1e-9;

/// How the random starting point is scaled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitScale {
    /// `‖b‖² = max(0, 1 − ‖a‖²)`, the zero-lag value every solution has.
    NormComplement,
    /// `‖b‖²` set to the given value.
    Fixed(f64),
}

#[derive(Debug, Clone)]
pub struct CompletionConfig {
    pub max_iters: usize,
    pub objective_tol: f64,
    pub grad_tol: f64,
    pub restarts: usize,
    pub seed: u64,
    pub init_scale: InitScale,
    /// L-BFGS history length.
    pub memory: usize,
    /// Run restarts concurrently. The selected result is the same as sequential.
    pub parallel_restarts: bool,
    /// Wall-clock budget for the whole call; attempts stop early once it runs out.
    pub time_limit: Option<Duration>,
}

impl Default for CompletionConfig {
    fn default() -> Self {
        Self {
            max_iters: 200_000,
            objective_tol: 1e-24,
            grad_tol: 1e-15,
            restarts: 4,
            seed: 0,
            init_scale: InitScale::NormComplement,
            memory: 12,
            parallel_restarts: false,
            time_limit: None,
        }
    }
}

impl CompletionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(GqspError::InvalidArgument(
                "max_iters must be at least 1".into(),
            ));
        }
        if !(self.objective_tol > 0.0) || !(self.grad_tol > 0.0) {
            return Err(GqspError::InvalidArgument(
                "tolerances must be positive".into(),
            ));
        }
        if self.restarts == 0 {
            return Err(GqspError::InvalidArgument(
                "restarts must be at least 1".into(),
            ));
        }
        if self.memory == 0 {
            return Err(GqspError::InvalidArgument(
                "memory must be at least 1".into(),
            ));
        }
        if let InitScale::Fixed(s) = self.init_scale {
            if !(s >= 0.0) {
                return Err(GqspError::InvalidArgument(
                    "fixed init scale must be non-negative".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CompletionReport {
    pub final_objective: f64,
    /// Iterations of the attempt that produced the returned `b`.
    pub iterations: usize,
    pub grad_norm: f64,
    #[serde(rename = "wall_time_s")]
    pub wall_time: f64,
    pub restarts_used: usize,
}

impl CompletionReport {
    pub fn converged(&self, tol: f64) -> bool {
        self.final_objective <= tol
    }
}

fn check_admissible(a: &[Complex64]) -> Result<()> {
    let p = LaurentPoly::from_coeffs(a.to_vec())?;
    let sup = sup_norm_sq(&p, default_grid_size(&p))?;
    if sup > 1.0 + ADMISSIBILITY_SLACK {
        return Err(GqspError::Inadmissible { sup_norm_sq: sup });
    }
    Ok(())
}

struct Attempt {
    b: Vec<Complex64>,
    f: f64,
    grad_norm: f64,
    iterations: usize,
}

fn attempt(
    problem: &CompletionProblem,
    a_norm_sq: f64,
    cfg: &CompletionConfig,
    index: usize,
    deadline: Option<Instant>,
) -> Attempt {
    let n = problem.degree() + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let target = match cfg.init_scale {
        InitScale::NormComplement => (1.0 - a_norm_sq).max(0.0),
        InitScale::Fixed(s) => s,
    };
    let mut b: Vec<Complex64> = (0..n).map(|_| gaussian_complex(&mut rng)).collect();
    let norm_sq: f64 = b.iter().map(|x| x.norm_sqr()).sum();
    let s = if norm_sq > 0.0 {
        (target / norm_sq).sqrt()
    } else {
        0.0
    };
    b.iter_mut().for_each(|x| *x *= s);

    let settings = lbfgs::Settings {
        memory: cfg.memory,
        max_iters: cfg.max_iters,
        f_tol: cfg.objective_tol,
        g_tol: cfg.grad_tol,
        deadline,
    };
    let out = lbfgs::minimize(
        |x, g| {
            problem
                .objective_and_gradient(x, g)
                .expect("lengths fixed by construction")
        },
        b,
        &settings,
    );
    Attempt {
        b: out.x,
        f: out.f,
        grad_norm: out.grad_norm,
        iterations: out.iterations,
    }
}

/// Minimizes `‖a ⋆ rev(a)* + b ⋆ rev(b)* − δ‖²` over `b`.
///
/// Non-convergence is soft: the best `b` is returned and the report's
/// `final_objective` exceeds `cfg.objective_tol`.
pub fn complete_via_optimization(
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
    let a_norm_sq: f64 = a.iter().map(|x| x.norm_sqr()).sum();
    let deadline = cfg.time_limit.map(|t| start + t);

    let (best, index) = if cfg.parallel_restarts {
        let attempts: Vec<Attempt> = (0..cfg.restarts)
            .into_par_iter()
            .map(|i| attempt(&problem, a_norm_sq, cfg, i, deadline))
            .collect();
        select(attempts, cfg.objective_tol)
    } else {
        let mut attempts = Vec::new();
        for i in 0..cfg.restarts {
            let at = attempt(&problem, a_norm_sq, cfg, i, deadline);
            let done = at.f <= cfg.objective_tol || deadline.is_some_and(|t| Instant::now() >= t);
            attempts.push(at);
            if done {
                break;
            }
        }
        select(attempts, cfg.objective_tol)
    };

    let report = CompletionReport {
        final_objective: best.f,
        iterations: best.iterations,
        grad_norm: best.grad_norm,
        wall_time: start.elapsed().as_secs_f64(),
        restarts_used: index + 1,
    };
    Ok((best.b, report))
}

/// First attempt under tolerance, else the lowest objective.
fn select(attempts: Vec<Attempt>, tol: f64) -> (Attempt, usize) {
    let index = attempts.iter().position(|a| a.f <= tol).unwrap_or_else(|| {
        attempts
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.f.total_cmp(&y.1.f))
            .map(|(i, _)| i)
            .expect("at least one restart")
    });
    let best = attempts.into_iter().nth(index).unwrap();
    (best, index)
}

/// `max_k | |P(t_k)|² + |Q(t_k)|² − 1 |` over an `m`-point grid.
pub fn validate_completion(a: &[Complex64], b: &[Complex64], m: usize) -> Result<f64> {
    let p = LaurentPoly::from_coeffs(a.to_vec())?;
    let q = LaurentPoly::from_coeffs(b.to_vec())?;
    let pv = eval_grid(&p, m)?;
    let qv = eval_grid(&q, m)?;
    Ok(pv
        .iter()
        .zip(&qv)
        .map(|(x, y)| (x.norm_sqr() + y.norm_sqr() - 1.0).abs())
        .fold(0.0, f64::max))
}

/// Which construction to use when a pipeline needs `Q`.
#[derive(Debug, Clone)]
pub enum CompletionStrategy {
    Optimization(CompletionConfig),
    Roots,
    /// Spectral factor polished by L-BFGS; see [`complete_min_phase`].
    MinimumPhase(CompletionConfig),
}

impl Default for CompletionStrategy {
    fn default() -> Self {
        CompletionStrategy::MinimumPhase(CompletionConfig::default())
    }
}

/// Runs the chosen construction. The report is `None` for the roots route.
pub fn complete(
    a: &[Complex64],
    strategy: &CompletionStrategy,
) -> Result<(Vec<Complex64>, Option<CompletionReport>)> {
    match strategy {
        CompletionStrategy::Roots => Ok((complete_via_roots(a)?, None)),
        CompletionStrategy::Optimization(cfg) | CompletionStrategy::MinimumPhase(cfg) => {
            let (b, report) = match strategy {
                CompletionStrategy::MinimumPhase(_) => complete_min_phase(a, cfg)?,
                _ => complete_via_optimization(a, cfg)?,
            };
            if !report.converged(cfg.objective_tol) && report.final_objective > 1e-20 {
                return Err(GqspError::NotConverged {
                    objective: report.final_objective,
                    tol: cfg.objective_tol,
                });
            }
            Ok((b, Some(report)))
        }
    }
}
