//! Least-squares fit of `f` on `[−1+δ, 1−δ]` by `Σ_{|m| ≤ M} c_m e^{iπmx/2}`.
//!
//! On a sub-interval the basis is a frame rather than orthogonal, so the
//! normal equations are badly conditioned; the solve is a truncated SVD.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{GqspError, Result};
use crate::poly::LaurentPoly;

/// Singular values below this fraction of the largest are dropped.
pub const SVD_CUTOFF: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierFitConfig {
    /// Half-width: indices `m ∈ [−M, M]`.
    pub m: usize,
    pub delta: f64,
    pub grid_size: usize,
    pub target_tol: f64,
}

impl FourierFitConfig {
    /// Grid of `8·(2M+1)` points and target `1e-6`.
    pub fn new(m: usize, delta: f64) -> Self {
        Self {
            m,
            delta,
            grid_size: 8 * (2 * m + 1),
            target_tol: 1e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(GqspError::InvalidArgument(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if self.grid_size < 2 * self.m + 1 {
            return Err(GqspError::Underdetermined {
                grid_size: self.grid_size,
                unknowns: 2 * self.m + 1,
            });
        }
        if !(self.target_tol > 0.0) {
            return Err(GqspError::InvalidArgument(
                "target_tol must be positive".into(),
            ));
        }
        Ok(())
    }

    fn points(&self, count: usize) -> Vec<f64> {
        let r = 1.0 - self.delta;
        if count == 1 {
            return vec![0.0];
        }
        (0..count)
            .map(|j| -r + 2.0 * r * j as f64 / (count - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FourierFit {
    /// `c_m` stored as a Laurent polynomial in `e^{iπx/2}`.
    pub coeffs: LaurentPoly,
    /// Max `|f − fit|` over a grid four times denser than the fit grid.
    pub max_residual: f64,
    pub within_target: bool,
}

impl FourierFit {
    pub fn eval(&self, x: f64) -> Complex64 {
        self.coeffs.eval(FRAC_PI_2 * x)
    }
}

pub fn fit_fourier_series(
    f: &dyn Fn(f64) -> Complex64,
    cfg: &FourierFitConfig,
) -> Result<FourierFit> {
    cfg.validate()?;
    let m = cfg.m as i64;
    let xs = cfg.points(cfg.grid_size);
    let basis = DMatrix::from_fn(xs.len(), 2 * cfg.m + 1, |j, k| {
        Complex64::from_polar(1.0, FRAC_PI_2 * (k as i64 - m) as f64 * xs[j])
    });
    let rhs = DVector::from_iterator(xs.len(), xs.iter().map(|&x| f(x)));
    if rhs.iter().any(|v| !v.is_finite()) {
        return Err(GqspError::InvalidArgument(
            "f is not finite on the fit domain".into(),
        ));
    }
    let svd = basis.svd(true, true);
    let cutoff = SVD_CUTOFF * svd.singular_values.max();
    let c = svd
        .solve(&rhs, cutoff)
        .map_err(|e| GqspError::NumericalDegeneracy(format!("least-squares solve failed: {e}")))?;
    let coeffs = LaurentPoly::new(c.iter().copied().collect(), -m)?;

    let check = cfg.points(4 * cfg.grid_size);
    let max_residual = check
        .iter()
        .map(|&x| (coeffs.eval(FRAC_PI_2 * x) - f(x)).norm())
        .fold(0.0, f64::max);
    Ok(FourierFit {
        coeffs,
        max_residual,
        within_target: max_residual <= cfg.target_tol,
    })
}

pub type NamedFunction = Box<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// `const1`, `exp-arcsin:<t>` (`e^{it·arcsin x}`) or `exp-sqrt:<t>`
/// (`e^{it√(x+1)}`).
pub fn named_function(spec: &str) -> Result<NamedFunction> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let param = |a: Option<&str>| -> Result<f64> {
        let a = a.ok_or_else(|| {
            GqspError::InvalidArgument(format!("{name} needs a parameter, e.g. {name}:0.5"))
        })?;
        a.parse::<f64>()
            .ok()
            .filter(|t| t.is_finite())
            .ok_or_else(|| GqspError::InvalidArgument(format!("bad parameter {a:?} for {name}")))
    };
    match name {
        "const1" if arg.is_none() => Ok(Box::new(|_| Complex64::new(1.0, 0.0))),
        "exp-arcsin" => {
            let t = param(arg)?;
            Ok(Box::new(move |x: f64| {
                Complex64::from_polar(1.0, t * x.asin())
            }))
        }
        "exp-sqrt" => {
            let t = param(arg)?;
            Ok(Box::new(move |x: f64| {
                Complex64::from_polar(1.0, t * (x + 1.0).sqrt())
            }))
        }
        _ => Err(GqspError::InvalidArgument(format!(
            "unknown function {spec:?}; expected const1, exp-arcsin:<t> or exp-sqrt:<t>"
        ))),
    }
}
