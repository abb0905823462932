//! Correlation mode: responses may come before or after a source event, so
//! each response is measured against the nearest source event.

use ppassoc::prelude::*;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let window = ObservationWindow::new(0.0, 100.0)?;
    let intensity = NullIntensity::uniform(window);
    let a = PointPattern::new(vec![10.0, 40.0, 75.0])?;
    let b = PointPattern::new(vec![9.2, 10.5, 39.1, 41.0, 60.0, 74.4, 76.2, 90.0])?;

    let sample = transform(&a, &b, &intensity, Mode::Correlation, None)?;
    println!("u-values: {:?}", sample.u);

    let out = run_test(&a, &b, &intensity, &TestOptions::correlation())?;
    println!("tau_hat = {:?}, p = {:.4}", out.tau_hat, out.p_value);

    // Capping the range keeps the test focused on short lags.
    let capped = run_test(&a, &b, &intensity, &TestOptions::correlation().with_tau_max(2.0))?;
    println!("with tau_max = 2: tau_hat = {:?}, p = {:.4}", capped.tau_hat, capped.p_value);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
