//! Null calibration: p-values from simulated null data should be uniform.
//! Pass the number of replicates as the first argument (default 500).

use ppassoc::simulate::{calibration_experiment, CalibrationConfig, RngSeed};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    run(500)
}

fn run(replicates: usize) -> Result<(), Box<dyn std::error::Error>> {
    let config = CalibrationConfig { replicates, ..CalibrationConfig::default() };
    let s = calibration_experiment(&config, RngSeed(7))?;
    println!("replicates: {}, mean n: {:.1}", s.replicates, s.mean_n);
    println!("K-S distance {:.4} vs 1% critical value {:.4}", s.ks_distance, s.ks_critical_1pct);
    println!("rejection rates: {:.3} at 1%, {:.3} at 5%", s.reject_rate_1pct, s.reject_rate_5pct);
    println!("uniform at the 1% level: {}", s.uniform_at_1pct());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    match std::env::args().nth(1) {
        Some(arg) => run(arg.parse()?),
        None => run_example(),
    }
}
