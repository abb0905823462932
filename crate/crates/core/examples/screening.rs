//! Screening a small network: every ordered pair of streams is tested, BH
//! controls the false discovery rate, and rejected pairs get a report.

use ppassoc::prelude::*;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let window = ObservationWindow::new(0.0, 1.0)?;
    let intensity = NullIntensity::uniform(window);
    let names = ["s0", "s1", "s2", "s3"];

    // s1 responds to s0 within 0.02. Each test is clipped to start at the
    // first event of its source.
    let mut rng = RngSeed(5).rng(0);
    let mut streams: Vec<PointPattern> = Vec::new();
    for _ in &names {
        streams.push(sample_null(&intensity, EventCount::Fixed(30), &mut rng)?);
    }
    let spec = AlternativeSpec {
        a: streams[0].clone(),
        intensity: intensity.clone(),
        mode: Mode::Triggering,
        tau: 0.02,
        lambda1: 400.0,
        lambda2: 20.0,
        fixed_n: None,
    };
    streams[1] = sample_alternative(&spec, &mut rng)?;

    let mut pairs = Vec::new();
    for (i, s) in names.iter().enumerate() {
        for (j, t) in names.iter().enumerate() {
            if i != j {
                pairs.push(PairInput { source: s, target: t, a: &streams[i], b: &streams[j], payloads: &[] });
            }
        }
    }
    let result = screen(&pairs, &intensity, &TestOptions::triggering(), 0.1)?;
    for e in &result.entries {
        println!("{} -> {}: p = {:.2e} ({:?})", e.source, e.target, e.outcome.p_value, e.tier);
    }
    print!("{}", result.to_csv_matrix());
    if let Some(report) = result.entries.iter().find_map(|e| e.report.as_ref()) {
        println!("{} events within tau_hat of the anchor", report.entries.len());
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
