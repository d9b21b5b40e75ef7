//! The completion objective `‖acorr(a) + acorr(b) − δ‖²` and its gradient.
//!
//! With `L ≥ 2d + 1` the lag-domain residual has no wrap-around, so by
//! Parseval the objective is `(1/L) Σ_k (|A_k|² + |B_k|² − 1)²` where `A`, `B`
//! are length-`L` DFTs of the zero-padded coefficient vectors. The same
//! spectrum `R_k = |A_k|² + |B_k|² − 1` gives the gradient:
//! `∂f/∂Re b_m + i ∂f/∂Im b_m = 4 (r ⋆ b)_m`, one inverse FFT away.
//!
//! `L = 2M` with `M ≥ d`, and the even and odd bins are handled as two
//! length-`M` transforms of `b` folded modulo `M`, the odd half after the
//! twiddle `e^{−iπn/M}`. When `M = d` the lags `±d` alias onto one bin; the grid
//! sum then sees `|2 Re r_d|²` instead of `2|r_d|²`, and adding back
//! `−2 Re(r_d²)` with `r_d = a_d ā_0 + b_d b̄_0` restores the exact value.

use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rustfft::Fft;

use crate::error::{GqspError, Result};
use crate::fft;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Precomputed state for repeated objective evaluations against a fixed `a`.
pub struct CompletionProblem {
    degree: usize,
    half: usize,
    /// `|A|²` on the even bins, then on the odd bins.
    power_a: [Vec<f64>; 2],
    twiddle: Vec<Complex64>,
    /// `a_d ā_0` when lags `±d` alias, else `None`.
    alias: Option<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    pool: Mutex<Vec<Workspace>>,
}

struct Workspace {
    bufs: [Vec<Complex64>; 2],
    scratch: Vec<Complex64>,
}

impl CompletionProblem {
    pub fn new(a: &[Complex64]) -> Result<Self> {
        if a.is_empty() {
            return Err(GqspError::InvalidArgument(
                "target coefficients are empty".into(),
            ));
        }
        let degree = a.len() - 1;
        let half = fft::good_len(degree);
        let alias = (half == degree).then(|| a[degree] * a[0].conj());
        let forward = fft::forward_plan(half);
        let inverse = fft::inverse_plan(half);
        let twiddle = (0..=degree)
            .map(|n| Complex64::from_polar(1.0, -PI * n as f64 / half as f64))
            .collect();
        let mut problem = Self {
            degree,
            half,
            power_a: [Vec::new(), Vec::new()],
            twiddle,
            alias,
            forward,
            inverse,
            pool: Mutex::new(Vec::new()),
        };
        let mut ws = problem.take_workspace();
        problem.transform(a, &mut ws);
        problem.power_a = ws
            .bufs
            .clone()
            .map(|v| v.iter().map(|x| x.norm_sqr()).collect());
        problem.return_workspace(ws);
        Ok(problem)
    }

    /// Degree `d` of the target; `b` must have `d + 1` entries.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of unit-circle samples `L` per evaluation.
    pub fn fft_len(&self) -> usize {
        2 * self.half
    }

    fn check_len(&self, b: &[Complex64]) -> Result<()> {
        if b.len() != self.degree + 1 {
            return Err(GqspError::InvalidArgument(format!(
                "length mismatch: a has {} coefficients, b has {}",
                self.degree + 1,
                b.len()
            )));
        }
        Ok(())
    }

    fn take_workspace(&self) -> Workspace {
        let cached = self.pool.lock().unwrap_or_else(|e| e.into_inner()).pop();
        cached.unwrap_or_else(|| {
            let n = self
                .forward
                .get_inplace_scratch_len()
                .max(self.inverse.get_inplace_scratch_len());
            Workspace {
                bufs: [vec![ZERO; self.half], vec![ZERO; self.half]],
                scratch: vec![ZERO; n],
            }
        })
    }

    fn return_workspace(&self, ws: Workspace) {
        self.pool.lock().unwrap_or_else(|e| e.into_inner()).push(ws);
    }

    /// Even and odd bins of the length-`2M` DFT of `x`.
    fn transform(&self, x: &[Complex64], ws: &mut Workspace) {
        let [even, odd] = &mut ws.bufs;
        let m = self.half;
        let n = x.len().min(m);
        even[..n].copy_from_slice(&x[..n]);
        even[n..].fill(ZERO);
        for ((o, xi), t) in odd.iter_mut().zip(x).zip(&self.twiddle) {
            *o = xi * t;
        }
        odd[n..].fill(ZERO);
        for (j, xi) in x.iter().enumerate().skip(m) {
            even[j % m] += xi;
            odd[j % m] += xi * self.twiddle[j];
        }
        self.forward.process_with_scratch(even, &mut ws.scratch);
        self.forward.process_with_scratch(odd, &mut ws.scratch);
    }

    /// Transform `b`; with `weight` each bin is then multiplied by its residual `R_k`.
    fn residual(&self, b: &[Complex64], ws: &mut Workspace, weight: bool) -> f64 {
        self.transform(b, ws);
        let mut sum = 0.0;
        for (buf, power) in ws.bufs.iter_mut().zip(&self.power_a) {
            for (bk, pa) in buf.iter_mut().zip(power) {
                let r = pa + bk.norm_sqr() - 1.0;
                sum += r * r;
                if weight {
                    *bk *= r;
                }
            }
        }
        sum / self.fft_len() as f64 - self.alias_lag(b).map_or(0.0, |r| 2.0 * (r * r).re)
    }

    fn alias_lag(&self, b: &[Complex64]) -> Option<Complex64> {
        self.alias.map(|c| c + b[self.degree] * b[0].conj())
    }

    pub fn objective(&self, b: &[Complex64]) -> Result<f64> {
        self.check_len(b)?;
        let mut ws = self.take_workspace();
        let value = self.residual(b, &mut ws, false);
        self.return_workspace(ws);
        Ok(value)
    }

    /// Objective value, writing the packed gradient into `grad`.
    pub fn objective_and_gradient(&self, b: &[Complex64], grad: &mut [Complex64]) -> Result<f64> {
        self.check_len(b)?;
        if grad.len() != b.len() {
            return Err(GqspError::InvalidArgument(
                "gradient buffer has the wrong length".into(),
            ));
        }
        let mut ws = self.take_workspace();
        let value = self.residual(b, &mut ws, true);
        let [even, odd] = &mut ws.bufs;
        self.inverse.process_with_scratch(even, &mut ws.scratch);
        self.inverse.process_with_scratch(odd, &mut ws.scratch);
        let scale = 4.0 / self.fft_len() as f64;
        let m = self.half;
        for (j, (g, t)) in grad.iter_mut().zip(&self.twiddle).enumerate() {
            *g = (even[j % m] + odd[j % m] * t.conj()) * scale;
        }
        if let Some(r) = self.alias_lag(b) {
            let d = self.degree;
            grad[0] -= 4.0 * r * b[d];
            grad[d] -= 4.0 * r.conj() * b[0];
        }
        self.return_workspace(ws);
        Ok(value)
    }
}

/// Squared 2-norm of `acorr(a) + acorr(b) − δ`, evaluated by FFT.
pub fn completion_objective(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(GqspError::InvalidArgument(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    CompletionProblem::new(a)?.objective(b)
}

/// Gradient of [`completion_objective`] with respect to `b`, packed as
/// `∂/∂Re b_m + i ∂/∂Im b_m`.
pub fn completion_gradient(a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.len() != b.len() {
        return Err(GqspError::InvalidArgument(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let problem = CompletionProblem::new(a)?;
    let mut grad = vec![ZERO; b.len()];
    problem.objective_and_gradient(b, &mut grad)?;
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{autocorrelation, convolve_naive};
    use rand::{Rng, SeedableRng};

    fn real(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    /// Direct lag-domain objective built from naive convolutions.
    fn objective_oracle(a: &[Complex64], b: &[Complex64]) -> f64 {
        let rev = |v: &[Complex64]| v.iter().rev().map(|c| c.conj()).collect::<Vec<_>>();
        let ra = convolve_naive(a, &rev(a)).unwrap();
        let rb = convolve_naive(b, &rev(b)).unwrap();
        let d = a.len() - 1;
        ra.iter()
            .zip(&rb)
            .enumerate()
            .map(|(j, (x, y))| {
                let delta = if j == d { 1.0 } else { 0.0 };
                (x + y - delta).norm_sqr()
            })
            .sum()
    }

    fn finite_difference(a: &[Complex64], b: &[Complex64], h: f64) -> Vec<Complex64> {
        let f = |v: &[Complex64]| objective_oracle(a, v);
        (0..b.len())
            .map(|m| {
                let mut p = b.to_vec();
                let mut q = b.to_vec();
                p[m].re += h;
                q[m].re -= h;
                let dre = (f(&p) - f(&q)) / (2.0 * h);
                let mut p = b.to_vec();
                let mut q = b.to_vec();
                p[m].im += h;
                q[m].im -= h;
                let dim = (f(&p) - f(&q)) / (2.0 * h);
                Complex64::new(dre, dim)
            })
            .collect()
    }

    #[test]
    fn objective_examples() {
        assert_eq!(
            completion_objective(&real(&[1.0]), &real(&[0.0])).unwrap(),
            0.0
        );
        let v = completion_objective(&real(&[0.5, 0.5]), &real(&[-0.5, 0.5])).unwrap();
        assert!(v < 1e-30, "{v}");
        let v = completion_objective(&real(&[1.0]), &real(&[1.0])).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        assert!(completion_objective(&real(&[1.0]), &real(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn objective_matches_lag_domain_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for d in [0, 1, 2, 5, 17, 64] {
            let mut v = || -> Vec<Complex64> {
                (0..=d)
                    .map(|_| {
                        Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5))
                    })
                    .collect()
            };
            let a = v();
            let b = v();
            let fast = completion_objective(&a, &b).unwrap();
            let slow = objective_oracle(&a, &b);
            assert!(
                (fast - slow).abs() <= 1e-12 * slow.max(1.0),
                "d={d}: {fast} vs {slow}"
            );
            // and against the public autocorrelation helper
            let ra = autocorrelation(&a).unwrap();
            assert_eq!(ra.len(), 2 * d + 1);
        }
    }

    #[test]
    fn gradient_examples() {
        let g = completion_gradient(&real(&[1.0]), &real(&[0.0])).unwrap();
        assert_eq!(g, real(&[0.0]));
        let g = completion_gradient(&real(&[0.5, 0.5]), &real(&[-0.5, 0.5])).unwrap();
        assert!(g.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt() < 1e-10);
        // f(b) = |b|^4 at a = [1], so the packed gradient at b = 1 is 4.
        let a = real(&[1.0]);
        let b = real(&[1.0]);
        let g = completion_gradient(&a, &b).unwrap();
        let fd = finite_difference(&a, &b, 1e-6);
        assert!(
            (g[0] - fd[0]).norm() <= 1e-6 * fd[0].norm(),
            "{} vs {}",
            g[0],
            fd[0]
        );
        assert!((g[0] - Complex64::new(4.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for d in [1, 3, 8, 33] {
            let mut v = || -> Vec<Complex64> {
                (0..=d)
                    .map(|_| {
                        Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5))
                    })
                    .collect()
            };
            let a = v();
            let b = v();
            let g = completion_gradient(&a, &b).unwrap();
            let fd = finite_difference(&a, &b, 1e-6);
            let err = g
                .iter()
                .zip(&fd)
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let norm = fd.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            assert!(err <= 1e-6 * norm, "d={d}: rel err {}", err / norm);
        }
    }
}
