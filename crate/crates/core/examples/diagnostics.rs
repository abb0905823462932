//! Diagnostics for a set of u-values: ECDF table, Fisher's combination and
//! the weighted K-S statistics.

use ppassoc::diagnostics::write_ecdf_csv;
use ppassoc::prelude::*;
use rand::Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = RngSeed(11).rng(0);
    // Uniforms with a surplus near zero.
    let mut u: Vec<f64> = (0..200)
        .map(|i| if i % 5 == 0 { 0.05 * rng.random::<f64>() } else { rng.random::<f64>() })
        .collect();
    u.sort_by(f64::total_cmp);

    let report = diagnose(&u, &KsConfig::default())?;
    println!("Fisher: X2 = {:.2} on {} df, p = {:.3e}", report.fisher.statistic, report.fisher.df, report.fisher.p_value);
    println!("weighted K-S G+ = {:.3}", report.weighted_ks_plus);
    println!("restricted T = {:.3}", report.restricted_statistic);
    println!("distance from uniform = {:.3}", report.uniform_distance);

    let mut table = Vec::new();
    write_ecdf_csv(&report.ecdf[..5], &mut table)?;
    print!("{}", String::from_utf8(table)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
