//! Complex Laurent polynomials evaluated on the unit circle.
//!
//! A [`LaurentPoly`] stores coefficients in ascending degree order together
//! with the degree of the first stored coefficient, so `z^-2 + 3 z` is
//! `min_degree = -2, coeffs = [1, 0, 0, 3]`. Everything here is evaluated at
//! `z = e^{it}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GqspError, Result};
use crate::fft;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Below this many output entries the quadratic convolution is faster.
const NAIVE_CONVOLUTION_CUTOFF: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    coeffs: Vec<Complex64>,
    min_degree: i64,
}

impl LaurentPoly {
    pub fn new(coeffs: Vec<Complex64>, min_degree: i64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(GqspError::InvalidArgument(
                "polynomial must have at least one coefficient".into(),
            ));
        }
        if let Some(i) = coeffs
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(GqspError::InvalidArgument(format!(
                "coefficient {i} is not finite"
            )));
        }
        Ok(Self { coeffs, min_degree })
    }

    /// Ordinary polynomial `sum_n coeffs[n] z^n`.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::new(coeffs, 0)
    }

    /// Convenience constructor for real coefficients starting at degree 0.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(), 0)
    }

    pub fn constant(c: Complex64) -> Self {
        Self {
            coeffs: vec![c],
            min_degree: 0,
        }
    }

    /// `z^k`.
    pub fn monomial(k: i64) -> Self {
        Self {
            coeffs: vec![Complex64::new(1.0, 0.0)],
            min_degree: k,
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    /// Highest stored degree, `min_degree + len - 1`.
    pub fn degree(&self) -> i64 {
        self.min_degree + self.coeffs.len() as i64 - 1
    }

    /// Number of stored degrees minus one.
    pub fn span(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^n` (zero outside the stored range).
    pub fn coeff(&self, n: i64) -> Complex64 {
        let idx = n - self.min_degree;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            ZERO
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// Multiplies by `z^k`; only the offset changes.
    pub fn shifted(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.clone(),
            min_degree: self.min_degree + k,
        }
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
            min_degree: self.min_degree,
        }
    }

    /// Sum of squared coefficient magnitudes.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Polynomial product.
    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let coeffs = convolve(&self.coeffs, &other.coeffs).expect("operands are non-empty");
        LaurentPoly {
            coeffs,
            min_degree: self.min_degree + other.min_degree,
        }
    }

    /// Drops leading and trailing coefficients with modulus `<= tol`, keeping at least one.
    pub fn trimmed(&self, tol: f64) -> LaurentPoly {
        let first = self.coeffs.iter().position(|c| c.norm() > tol);
        match first {
            None => LaurentPoly {
                coeffs: vec![ZERO],
                min_degree: 0,
            },
            Some(first) => {
                let last = self.coeffs.iter().rposition(|c| c.norm() > tol).unwrap();
                LaurentPoly {
                    coeffs: self.coeffs[first..=last].to_vec(),
                    min_degree: self.min_degree + first as i64,
                }
            }
        }
    }

    /// Value at `z = e^{it}`.
    pub fn eval(&self, t: f64) -> Complex64 {
        eval_unit_circle(self, t)
    }
}

/// `sum_n c_n e^{int}` over all stored degrees, by Horner's rule in `e^{it}`.
pub fn eval_unit_circle(p: &LaurentPoly, t: f64) -> Complex64 {
    let z = Complex64::from_polar(1.0, t);
    let body = p.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c);
    body * Complex64::from_polar(1.0, t * p.min_degree as f64)
}

/// Values of `p` at `t_k = 2 pi k / m`, `k = 0..m`.
///
/// Degrees are folded modulo `m`, so this is exact sampling even when `m` is
/// smaller than the span (the samples then alias, as they should).
pub fn eval_grid(p: &LaurentPoly, m: usize) -> Result<Vec<Complex64>> {
    if m == 0 {
        return Err(GqspError::InvalidArgument(
            "grid size must be positive".into(),
        ));
    }
    let mut buf = vec![ZERO; m];
    for (j, &c) in p.coeffs.iter().enumerate() {
        let n = p.min_degree + j as i64;
        buf[n.rem_euclid(m as i64) as usize] += c;
    }
    fft::inverse(&mut buf);
    Ok(buf)
}

/// Default sampling density: `8 (span + 1)` rounded up to a power of two.
pub fn default_grid_size(p: &LaurentPoly) -> usize {
    (8 * (p.span() + 1)).next_power_of_two()
}

/// Full linear convolution, choosing the FFT path for long inputs.
pub fn convolve(a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.is_empty() || b.is_empty() {
        return Err(GqspError::InvalidArgument(
            "cannot convolve an empty sequence".into(),
        ));
    }
    if a.len().min(b.len()) <= 8 || a.len() + b.len() - 1 <= NAIVE_CONVOLUTION_CUTOFF {
        convolve_naive(a, b)
    } else {
        convolve_fft(a, b)
    }
}

/// Quadratic-time reference convolution.
pub fn convolve_naive(a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.is_empty() || b.is_empty() {
        return Err(GqspError::InvalidArgument(
            "cannot convolve an empty sequence".into(),
        ));
    }
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    Ok(out)
}

/// Convolution through a zero-padded power-of-two FFT.
pub fn convolve_fft(a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.is_empty() || b.is_empty() {
        return Err(GqspError::InvalidArgument(
            "cannot convolve an empty sequence".into(),
        ));
    }
    let out_len = a.len() + b.len() - 1;
    let len = out_len.next_power_of_two();
    let mut fa = fft::padded(a, len);
    let mut fb = fft::padded(b, len);
    fft::forward(&mut fa);
    fft::forward(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    fft::inverse(&mut fa);
    let inv = 1.0 / len as f64;
    fa.truncate(out_len);
    fa.iter_mut().for_each(|x| *x *= inv);
    Ok(fa)
}

/// `a ⋆ reverse(conj(a))`: entry `d + l` is the lag-`l` autocorrelation
/// `sum_n a_n conj(a_{n-l})`, for `l = -d..=d`.
pub fn autocorrelation(a: &[Complex64]) -> Result<Vec<Complex64>> {
    let rev: Vec<Complex64> = a.iter().rev().map(|c| c.conj()).collect();
    convolve(a, &rev)
}

/// Largest `|p|^2` over an `m`-point grid.
///
/// This is a lower bound on the true supremum over the circle; the gap
/// shrinks quadratically with the oversampling factor.
pub fn sup_norm_sq(p: &LaurentPoly, m: usize) -> Result<f64> {
    Ok(eval_grid(p, m)?
        .iter()
        .map(|v| v.norm_sqr())
        .fold(0.0, f64::max))
}

/// Grid supremum followed by a golden-section polish around the largest local maxima.
pub fn sup_norm_sq_refined(p: &LaurentPoly) -> f64 {
    let m = default_grid_size(p).max(64);
    let vals: Vec<f64> = eval_grid(p, m)
        .expect("grid size is positive")
        .iter()
        .map(|v| v.norm_sqr())
        .collect();
    let mut peaks: Vec<usize> = (0..m)
        .filter(|&k| vals[k] >= vals[(k + m - 1) % m] && vals[k] >= vals[(k + 1) % m])
        .collect();
    peaks.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
    peaks.truncate(8);

    let h = 2.0 * PI / m as f64;
    let f = |t: f64| eval_unit_circle(p, t).norm_sqr();
    let mut best = vals.iter().copied().fold(0.0, f64::max);
    for k in peaks {
        let t0 = h * k as f64;
        best = best.max(golden_max(&f, t0 - h, t0 + h));
    }
    best
}

fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    f1.max(f2)
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    min_degree: i64,
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            min_degree: self.min_degree,
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(deserializer)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        LaurentPoly::new(coeffs, raw.min_degree).map_err(serde::de::Error::custom)
    }
}
