//! Limited-memory BFGS over complex vectors viewed as `R^{2n}`.
//!
//! Two-loop recursion for the search direction and a strong-Wolfe line search
//! (bracketing + safeguarded quadratic zoom).

use std::collections::VecDeque;
use std::time::Instant;

use num_complex::Complex64;

#[derive(Debug, Clone)]
pub(crate) struct Settings {
    pub memory: usize,
    pub max_iters: usize,
    pub f_tol: f64,
    pub g_tol: f64,
    pub deadline: Option<Instant>,
}

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub x: Vec<Complex64>,
    pub f: f64,
    pub grad_norm: f64,
    pub iterations: usize,
}

const C1: f64 = 1e-4;
const C2: f64 = 0.9;
const MAX_LINE_EVALS: usize = 40;

fn dot(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.re * y.re + x.im * y.im)
        .sum()
}

fn norm(a: &[Complex64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(x: &[Complex64], alpha: f64, d: &[Complex64]) -> Vec<Complex64> {
    x.iter().zip(d).map(|(xi, di)| xi + di * alpha).collect()
}

struct Pair {
    s: Vec<Complex64>,
    y: Vec<Complex64>,
    rho: f64,
}

fn direction(g: &[Complex64], hist: &VecDeque<Pair>) -> Vec<Complex64> {
    let mut q: Vec<Complex64> = g.iter().map(|x| -x).collect();
    let mut alphas = Vec::with_capacity(hist.len());
    for p in hist.iter().rev() {
        let a = p.rho * dot(&p.s, &q);
        for (qi, yi) in q.iter_mut().zip(&p.y) {
            *qi -= yi * a;
        }
        alphas.push(a);
    }
    if let Some(last) = hist.back() {
        let gamma = dot(&last.s, &last.y) / dot(&last.y, &last.y);
        q.iter_mut().for_each(|x| *x *= gamma);
    }
    for (p, a) in hist.iter().zip(alphas.iter().rev()) {
        let b = p.rho * dot(&p.y, &q);
        for (qi, si) in q.iter_mut().zip(&p.s) {
            *qi += si * (a - b);
        }
    }
    q
}

struct Sample {
    alpha: f64,
    f: f64,
    slope: f64,
    x: Vec<Complex64>,
    g: Vec<Complex64>,
}

fn evaluate<F>(fg: &mut F, x: &[Complex64], d: &[Complex64], alpha: f64) -> Sample
where
    F: FnMut(&[Complex64], &mut [Complex64]) -> f64,
{
    let xn = axpy(x, alpha, d);
    let mut g = vec![Complex64::new(0.0, 0.0); x.len()];
    let f = fg(&xn, &mut g);
    let slope = dot(&g, d);
    Sample {
        alpha,
        f,
        slope,
        x: xn,
        g,
    }
}

/// Strong-Wolfe line search along `d`. Returns `None` when no acceptable
/// decrease can be found.
fn line_search<F>(
    fg: &mut F,
    x: &[Complex64],
    f0: f64,
    slope0: f64,
    d: &[Complex64],
    init: f64,
) -> Option<Sample>
where
    F: FnMut(&[Complex64], &mut [Complex64]) -> f64,
{
    let armijo = |s: &Sample| s.f <= f0 + C1 * s.alpha * slope0;
    let curvature = |s: &Sample| s.slope.abs() <= -C2 * slope0;

    let mut prev = Sample {
        alpha: 0.0,
        f: f0,
        slope: slope0,
        x: x.to_vec(),
        g: Vec::new(),
    };
    let mut alpha = init;
    let mut evals = 0;
    let (mut lo, mut hi) = loop {
        let cur = evaluate(fg, x, d, alpha);
        evals += 1;
        if !cur.f.is_finite() {
            alpha *= 0.1;
            if evals >= MAX_LINE_EVALS {
                return None;
            }
            continue;
        }
        if !armijo(&cur) || (evals > 1 && cur.f >= prev.f) {
            break (prev, cur);
        }
        if curvature(&cur) {
            return Some(cur);
        }
        if cur.slope >= 0.0 {
            break (cur, prev);
        }
        if evals >= MAX_LINE_EVALS {
            return Some(cur);
        }
        alpha = cur.alpha * 2.0;
        prev = cur;
    };

    while evals < MAX_LINE_EVALS {
        let width = hi.alpha - lo.alpha;
        // Minimizer of the quadratic through (lo.f, lo.slope) and hi.f.
        let denom = 2.0 * (hi.f - lo.f - lo.slope * width);
        let mut trial = if denom > 0.0 {
            lo.alpha - lo.slope * width * width / denom
        } else {
            f64::NAN
        };
        let (a, b) = if lo.alpha < hi.alpha {
            (lo.alpha, hi.alpha)
        } else {
            (hi.alpha, lo.alpha)
        };
        let margin = 0.1 * (b - a);
        if !trial.is_finite() || trial < a + margin || trial > b - margin {
            trial = 0.5 * (a + b);
        }
        if (b - a) <= 1e-16 * b.abs().max(1e-300) {
            break;
        }
        let cur = evaluate(fg, x, d, trial);
        evals += 1;
        if !cur.f.is_finite() || !armijo(&cur) || cur.f >= lo.f {
            hi = cur;
        } else {
            if curvature(&cur) {
                return Some(cur);
            }
            if cur.slope * (hi.alpha - lo.alpha) >= 0.0 {
                hi = lo;
            }
            lo = cur;
        }
    }
    // Accept the best Armijo point found, if any.
    if lo.alpha > 0.0 && lo.f < f0 {
        Some(lo)
    } else {
        None
    }
}

pub(crate) fn minimize<F>(mut fg: F, x0: Vec<Complex64>, settings: &Settings) -> Outcome
where
    F: FnMut(&[Complex64], &mut [Complex64]) -> f64,
{
    let mut x = x0;
    let mut g = vec![Complex64::new(0.0, 0.0); x.len()];
    let mut f = fg(&x, &mut g);
    let mut hist: VecDeque<Pair> = VecDeque::with_capacity(settings.memory);
    let mut slow_steps = 0usize;

    let mut iterations = 0;
    loop {
        let gnorm = norm(&g);
        if f <= settings.f_tol {
            break;
        }
        if gnorm <= settings.g_tol {
            break;
        }
        if iterations >= settings.max_iters
            || settings.deadline.is_some_and(|t| Instant::now() >= t)
        {
            break;
        }
        iterations += 1;

        let mut d = direction(&g, &hist);
        let mut slope = dot(&d, &g);
        if !(slope < 0.0) {
            hist.clear();
            d = g.iter().map(|v| -v).collect();
            slope = -gnorm * gnorm;
        }
        let init = if hist.is_empty() {
            (1.0 / gnorm).min(1.0)
        } else {
            1.0
        };
        let step = match line_search(&mut fg, &x, f, slope, &d, init) {
            Some(s) => s,
            None if !hist.is_empty() => {
                hist.clear();
                continue;
            }
            None => break,
        };

        let s: Vec<Complex64> = step.x.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<Complex64> = step.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-300 && sy > f64::EPSILON * norm(&s) * norm(&y) {
            if hist.len() == settings.memory {
                hist.pop_front();
            }
            hist.push_back(Pair {
                s,
                y,
                rho: 1.0 / sy,
            });
        }

        if f - step.f <= 1e-14 * f {
            slow_steps += 1;
        } else {
            slow_steps = 0;
        }
        x = step.x;
        g = step.g;
        f = step.f;
        if slow_steps >= 25 {
            break;
        }
    }

    Outcome {
        grad_norm: norm(&g),
        x,
        f,
        iterations,
    }
}
