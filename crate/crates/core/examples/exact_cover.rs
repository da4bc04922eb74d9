//! Exact Cover 3 instances with a unique satisfying assignment.

use aqclab::models::{brute_force_ground, gen_exact_cover, SpinConfiguration};

pub fn main() -> aqclab::Result<()> {
    let mut ratios = Vec::new();
    for seed in 0..10 {
        let ec = gen_exact_cover(10, seed)?;
        let truth = brute_force_ground(&ec.cost)?;
        let solution = SpinConfiguration::from_index(10, ec.solution);
        println!(
            "seed {seed}: {:>2} clauses, ratio {:.2}, solution {:010b}, unique = {}, {} draws",
            ec.clauses.len(),
            ec.ratio,
            ec.solution,
            truth.minimizers == vec![solution],
            ec.attempts
        );
        ratios.push(ec.ratio);
    }
    println!("mean ratio {:.3}", ratios.iter().sum::<f64>() / ratios.len() as f64);
    Ok(())
}
