//! The exact p-value machinery on its own: thresholds for a statistic value
//! and the probability that ordered uniforms cross them.

use ppassoc::exactp::crossing_probability;
use ppassoc::prelude::*;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // One u-value at 0.2 gives T = 5 and p = 0.2.
    let th = solve_thresholds(5f64.ln(), 1)?;
    println!("n = 1, T = 5: o = {:?}, p = {}", th.o, p_value(5f64.ln(), 1, None)?);

    // Two uniforms: P(u1 >= 0.2, u2 >= 0.5) = 0.8^2 - 0.3^2.
    println!("survival(0.2, 0.5) = {}", ordered_uniform_survival(&[0.2, 0.5])?);

    for n in [10, 100, 1000, 5000] {
        let p = p_value(0.05, n, None)?;
        println!("ln T = 0.05, n = {n:>4}: p = {p:.3e}");
    }

    // Very small crossing probabilities keep their relative accuracy.
    println!("crossing(1e-15, 1e-12) = {:.6e}", crossing_probability(&[1e-15, 1e-12])?);

    // Limiting the range can only lower the p-value.
    println!(
        "n = 50, ln T = 0.1: p = {:.4}, with u_max = 0.3: p = {:.4}",
        p_value(0.1, 50, None)?,
        p_value(0.1, 50, Some(0.3))?
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
