//! The classic Riesz product on powers of three.
//!
//! For a dissociate set and `|φ| ≤ ½`, `∏(1 + φ(γ)γ + conj(φ(γ))γ⁻¹)` is a
//! nonnegative polynomial with mean one whose coefficients on the set are
//! exactly `φ`. Scaling unimodular data by ½ bounds the Sidon constant by 2.

use num_complex::Complex64;
use sidonlab::interpolate::{certify_family, classic_interpolate, FamilyOptions, InterpolationOptions, Phi, Route};
use sidonlab::ElementSet;

fn main() -> sidonlab::Result<()> {
    let set = ElementSet::integers(&[3, 9, 27, 81]);
    let phi: Phi = set
        .elems
        .iter()
        .zip([Complex64::new(0.5, 0.0), Complex64::new(0.0, -0.5), Complex64::new(-0.3, 0.1), Complex64::new(0.2, 0.2)])
        .map(|(g, v)| (g.clone(), v))
        .collect();

    let out = classic_interpolate(&set, &phi, &InterpolationOptions::default())?;
    let cert = &out.certificate;
    println!("P has {} terms", out.polynomial.len());
    println!("residual {:e}, P̂(0) = {}", cert.residual, cert.mass_at_identity);
    if let Some(n) = &cert.nonneg {
        println!("nonnegative: {} (lower bound {:e})", n.certified, n.lower_bound);
    }

    let family = certify_family(&set, &Route::Classic, &FamilyOptions::default())?;
    println!(
        "family of {} sign + {} random patterns: Sidon constant <= {} (unconditional: {})",
        family.sign_patterns, family.random_patterns, family.implied_sidon_bound, family.unconditional
    );
    Ok(())
}
