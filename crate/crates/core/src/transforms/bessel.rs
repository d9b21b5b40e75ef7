//! Bessel functions of the first kind for integer order.
//!
//! Power series near the origin, Miller's downward recurrence normalized by
//! `J_0 + 2 Σ J_{2k} = 1` elsewhere.

/// Below this `|t|` the ascending series is used.
pub const SERIES_LIMIT: f64 = 1.0;

/// Documented argument range.
pub const MAX_ARGUMENT: f64 = 1e3;

const RESCALE_ABOVE: f64 = 1e250;

fn series(n: usize, t: f64) -> f64 {
    let half = 0.5 * t;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
        if term == 0.0 {
            return 0.0;
        }
    }
    let mut sum = term;
    let h2 = half * half;
    for k in 1..200 {
        term *= -h2 / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `J_0(t), …, J_{n_max}(t)`.
pub fn bessel_j_all(n_max: usize, t: f64) -> Vec<f64> {
    if t == 0.0 {
        let mut out = vec![0.0; n_max + 1];
        out[0] = 1.0;
        return out;
    }
    let x = t.abs();
    let mut out = if x <= SERIES_LIMIT {
        (0..=n_max).map(|n| series(n, x)).collect()
    } else {
        miller(n_max, x)
    };
    if t < 0.0 {
        for (n, v) in out.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

fn miller(n_max: usize, x: f64) -> Vec<f64> {
    let top = (n_max as f64).max(x);
    let mut start = top as usize + 20 + (40.0 * top).sqrt() as usize;
    start += start % 2;
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1.0;
    let inv = 2.0 / x;
    for k in (1..=start).rev() {
        let prev = k as f64 * inv * vals[k] - vals[k + 1];
        vals[k - 1] = prev;
        if prev.abs() > RESCALE_ABOVE {
            for v in &mut vals[k - 1..] {
                *v /= RESCALE_ABOVE;
            }
        }
    }
    let norm = vals[0] + 2.0 * vals.iter().skip(2).step_by(2).sum::<f64>();
    vals.truncate(n_max + 1);
    vals.iter_mut().for_each(|v| *v /= norm);
    vals
}

/// `J_n(t)` for `n ≥ 0`.
pub fn bessel_j(n: usize, t: f64) -> f64 {
    if t.abs() <= SERIES_LIMIT {
        let v = series(n, t.abs());
        return if t < 0.0 && n % 2 == 1 { -v } else { v };
    }
    bessel_j_all(n, t)[n]
}

/// Smallest `n' ≥ ⌈|t|⌉` with `Σ_{|n|>n'} |J_n(t)| < eps`, by summing the
/// tail explicitly until terms drop below `eps · 1e-3`.
pub fn truncation_order(t: f64, eps: f64) -> usize {
    assert!(eps > 0.0, "eps must be positive");
    let floor = t.abs().ceil() as usize;
    let stop = eps * 1e-3;
    let mut k = floor + 20;
    let mut js = bessel_j_all(k, t);
    while js[k].abs() > stop || js[k - 1].abs() > stop {
        k += 20;
        js = bessel_j_all(k, t);
    }
    // tail[n] = 2 Σ_{m > n} |J_m|
    let mut tail = 0.0;
    let mut best = k;
    for n in (floor..k).rev() {
        tail += 2.0 * js[n + 1].abs();
        if tail < eps {
            best = n;
        } else {
            break;
        }
    }
    best
}
