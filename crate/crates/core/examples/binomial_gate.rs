//! The entropy bound on central binomial coefficients, checked exactly.

use sidonlab::extract::{binomial_gate_check, gate_exponent};

fn main() -> sidonlab::Result<()> {
    let sizes: Vec<u64> = (1..=32).map(|h| 2 * h).collect();
    let thetas: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let report = binomial_gate_check(&sizes, &thetas)?;
    for &t in &thetas {
        println!("s({t:.1}) = {:.6}", gate_exponent(t));
    }
    println!("all {} rows hold: {}, tightest slack {:.4} bits", report.rows.len(), report.all_hold, report.min_slack_bits);
    Ok(())
}
