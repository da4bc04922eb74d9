//! A small solver comparison with time-to-solution speedups and a success histogram.

use aqclab::bench::{run_benchmark, speedup_metrics, success_histogram, BenchConfig};

const CONFIG: &str = r#"
seed = 7
runs = 100

[ensemble]
family = "spin-glass"
n = 6
count = 12

[[solver]]
kind = "sa"
sweeps = 10
k = 1.0

[[solver]]
kind = "qa"
tau = 5.0
dt = 0.05
gamma0 = 5.0
gamma = 6.0

[[solver]]
kind = "random"
"#;

pub fn main() -> aqclab::Result<()> {
    let cfg = BenchConfig::from_toml(CONFIG)?;
    let out = run_benchmark(&cfg)?;
    print!("{}", out.summary_csv());
    for r in &out.reports {
        let h = success_histogram(&r.success_values(), cfg.bins)?;
        println!("{}: histogram {:?} bimodality {:?}", r.solver, h.counts, h.bimodality);
    }
    let (a, b) = (&out.reports[0], &out.reports[2]);
    let speedup = speedup_metrics(a, b, cfg.level)?;
    println!(
        "{} vs {}: quotient of medians {:.4}, median of quotients {:.4}, {} excluded",
        a.solver, b.solver, speedup.quotient_of_quantiles, speedup.quantile_of_quotient, speedup.excluded
    );
    Ok(())
}
