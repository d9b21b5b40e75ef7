//! Objective evaluation time against degree; prints CSV.

use gqsp::bench::{complex_real_ratios, max_step_ratio, run_bench, to_csv, BenchConfig, PolyKind};

fn main() -> gqsp::Result<()> {
    let cfg = BenchConfig {
        degrees: (10..=16).map(|e| 1 << e).collect(),
        repeats: 3,
        full_opt_max_degree: 1 << 11,
        ..Default::default()
    };
    let records = run_bench(&cfg)?;
    print!("{}", to_csv(&records));
    for kind in [PolyKind::Real, PolyKind::Complex] {
        if let Some(r) = max_step_ratio(&records, kind) {
            println!("# {}: largest time(2d)/time(d) = {r:.2}", kind.as_str());
        }
    }
    for (d, r) in complex_real_ratios(&records) {
        println!("# d = {d}: complex/real = {r:.2}");
    }
    Ok(())
}
