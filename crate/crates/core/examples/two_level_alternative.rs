//! Sampling the two-level alternative and checking that the u-values put the
//! predicted share of mass below the region size w.

use ppassoc::prelude::*;
use ppassoc::simulate::two_level_experiment;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let window = ObservationWindow::new(0.0, 1.0)?;
    let spec = AlternativeSpec {
        a: PointPattern::new(vec![0.0, 0.3, 0.65])?,
        intensity: NullIntensity::build(&[0.0, 0.5, 1.0], &[1.4, 0.6], window)?,
        mode: Mode::Triggering,
        tau: 0.05,
        lambda1: 5.0,
        lambda2: 1.0,
        fixed_n: Some(100),
    };
    let b = sample_alternative(&spec, &mut RngSeed(1).rng(0))?;
    println!("drew {} events, first few: {:?}", b.len(), &b.times()[..5]);

    let check = two_level_experiment(&spec, 100, RngSeed(2))?;
    println!(
        "w = {:.4}: expected fraction {:.4}, observed {}/{} (z = {:.2})",
        check.region_mass, check.expected_fraction, check.observed_below, check.total, check.z_score
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
