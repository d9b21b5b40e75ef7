//! Timing of the completion objective and of full optimizations against degree.

use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::completion::{complete_via_optimization, CompletionConfig, CompletionProblem};
use crate::error::{GqspError, Result};
use crate::sampling::{gaussian_complex, random_admissible_poly};

/// Default length of one objective timing sample.
pub const MIN_SAMPLE_MS: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyKind {
    Real,
    Complex,
}

impl PolyKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PolyKind::Real => "real",
            PolyKind::Complex => "complex",
        }
    }
}

impl std::str::FromStr for PolyKind {
    type Err = GqspError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(PolyKind::Real),
            "complex" => Ok(PolyKind::Complex),
            other => Err(GqspError::InvalidArgument(format!(
                "unknown kind {other:?}; expected real or complex"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub degree: usize,
    pub kind: PolyKind,
    /// Median time of one objective-plus-gradient evaluation.
    pub objective_eval_ms: f64,
    /// Median time of a full optimization; `None` above `full_opt_max_degree`.
    pub full_opt_ms: Option<f64>,
    /// Iterations of the median-time optimization run.
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub degrees: Vec<usize>,
    pub kinds: Vec<PolyKind>,
    pub repeats: usize,
    pub seed: u64,
    pub full_opt_max_degree: usize,
    /// Each objective timing sample averages evaluations over at least this long.
    pub min_sample_ms: f64,
    pub completion: CompletionConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            degrees: (12..=18).map(|e| 1usize << e).collect(),
            kinds: vec![PolyKind::Real, PolyKind::Complex],
            repeats: 5,
            seed: 0,
            full_opt_max_degree: 1 << 14,
            min_sample_ms: MIN_SAMPLE_MS,
            completion: CompletionConfig {
                objective_tol: 1e-20,
                // Fixed work per run keeps full-optimization times comparable.
                max_iters: 20_000,
                restarts: 1,
                ..CompletionConfig::default()
            },
        }
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Mean time of one objective-plus-gradient evaluation over a batch of at
/// least [`MIN_SAMPLE_MS`].
pub fn time_objective_eval(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    time_problem(&CompletionProblem::new(a)?, b, MIN_SAMPLE_MS)
}

fn time_problem(problem: &CompletionProblem, b: &[Complex64], min_ms: f64) -> Result<f64> {
    let mut grad = vec![Complex64::new(0.0, 0.0); b.len()];
    problem.objective_and_gradient(b, &mut grad)?;
    let start = Instant::now();
    let mut count = 0usize;
    loop {
        problem.objective_and_gradient(b, &mut grad)?;
        count += 1;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        if ms >= min_ms && count >= 3 {
            return Ok(ms / count as f64);
        }
    }
}

struct Case {
    degree: usize,
    kind: PolyKind,
    p: Vec<Complex64>,
    b: Vec<Complex64>,
    problem: CompletionProblem,
    eval: Vec<f64>,
    full: Vec<(f64, usize)>,
}

/// One record per `(degree, kind)`. Each repeat sweeps every case once, so
/// slow spells on a shared machine spread across degrees instead of landing
/// on one.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if cfg.repeats == 0 {
        return Err(GqspError::InvalidArgument(
            "repeats must be at least 1".into(),
        ));
    }
    if cfg.degrees.windows(2).any(|w| w[0] > w[1]) {
        return Err(GqspError::InvalidArgument(
            "degrees must be sorted ascending".into(),
        ));
    }
    let mut cases = Vec::new();
    for &d in &cfg.degrees {
        for (ki, &kind) in cfg.kinds.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream((d as u64) << 8 | ki as u64);
            let p = random_admissible_poly(d, 0.99, kind == PolyKind::Real, &mut rng).into_coeffs();
            let b: Vec<Complex64> = (0..=d).map(|_| gaussian_complex(&mut rng)).collect();
            let problem = CompletionProblem::new(&p)?;
            cases.push(Case {
                degree: d,
                kind,
                p,
                b,
                problem,
                eval: Vec::new(),
                full: Vec::new(),
            });
        }
    }
    for r in 0..cfg.repeats {
        for case in &mut cases {
            case.eval
                .push(time_problem(&case.problem, &case.b, cfg.min_sample_ms)?);
        }
        for case in cases
            .iter_mut()
            .filter(|c| c.degree <= cfg.full_opt_max_degree)
        {
            let c = CompletionConfig {
                seed: cfg.seed.wrapping_add(r as u64),
                ..cfg.completion.clone()
            };
            let start = Instant::now();
            let (_, report) = complete_via_optimization(&case.p, &c)?;
            case.full
                .push((start.elapsed().as_secs_f64() * 1e3, report.iterations));
        }
    }
    Ok(cases
        .into_iter()
        .map(|mut case| {
            let (full_opt_ms, iterations) = if case.full.is_empty() {
                (None, 0)
            } else {
                case.full.sort_by(|x, y| x.0.total_cmp(&y.0));
                let mid = case.full[case.full.len() / 2];
                (Some(median(case.full.iter().map(|f| f.0).collect())), mid.1)
            };
            BenchRecord {
                degree: case.degree,
                kind: case.kind,
                objective_eval_ms: median(case.eval),
                full_opt_ms,
                iterations,
            }
        })
        .collect())
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut s = String::from("degree,kind,objective_eval_ms,full_opt_ms,iterations\n");
    for r in records {
        let full = r.full_opt_ms.map(|v| format!("{v:.6}")).unwrap_or_default();
        s.push_str(&format!(
            "{},{},{:.6},{},{}\n",
            r.degree,
            r.kind.as_str(),
            r.objective_eval_ms,
            full,
            r.iterations
        ));
    }
    s
}

/// Largest `time(d_{i+1}) / time(d_i)` for the given kind.
pub fn max_step_ratio(records: &[BenchRecord], kind: PolyKind) -> Option<f64> {
    let rows: Vec<_> = records.iter().filter(|r| r.kind == kind).collect();
    rows.windows(2)
        .map(|w| w[1].objective_eval_ms / w[0].objective_eval_ms)
        .reduce(f64::max)
}

/// `complex / real` objective time at each degree where both were measured.
pub fn complex_real_ratios(records: &[BenchRecord]) -> Vec<(usize, f64)> {
    records
        .iter()
        .filter(|r| r.kind == PolyKind::Complex)
        .filter_map(|c| {
            records
                .iter()
                .find(|r| r.kind == PolyKind::Real && r.degree == c.degree)
                .map(|r| (c.degree, c.objective_eval_ms / r.objective_eval_ms))
        })
        .collect()
}
