//! As the rates grow with a fixed ratio, the range estimate converges to the
//! true range and the power goes to one.

use ppassoc::simulate::{consistency_experiment, ConsistencyConfig, RngSeed};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let config = ConsistencyConfig { replicates: 40, lambda2_ladder: vec![10.0, 100.0, 500.0], ..Default::default() };
    println!("{:>8} {:>8} {:>10} {:>14} {:>6}", "lambda1", "lambda2", "mean n", "median error", "power");
    for r in consistency_experiment(&config, RngSeed(3))? {
        println!(
            "{:>8} {:>8} {:>10.1} {:>14.5} {:>6.2}",
            r.lambda1, r.lambda2, r.mean_n, r.median_abs_error, r.power
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
