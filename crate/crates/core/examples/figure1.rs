//! The scaled restricted likelihood ratio and the weighted K-S statistic
//! have nearly the same null distribution away from the ends of [0, 1].

use ppassoc::prelude::*;
use ppassoc::simulate::figure1_experiment;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 1000;
    let reps = 300;
    let inner = figure1_experiment(n, KsConfig::new(0.01, 0.99)?, reps, RngSeed(1))?;
    let edge = 1.0 / (n as f64 + 1.0);
    let full = figure1_experiment(n, KsConfig::new(edge, 1.0 - edge)?, reps, RngSeed(1))?;
    println!("sup distance, gamma = (0.01, 0.99): {:.3}", inner.sup_distance);
    println!("sup distance, gamma = (1/(n+1), n/(n+1)): {:.3}", full.sup_distance);
    for p in inner.likelihood_ratio_ecdf().iter().step_by(60) {
        println!("  LR {:.3} -> {:.3}", p.u, p.ecdf);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
