//! Peak polynomials and the `1 + ε` interpolation.
//!
//! A peak polynomial `p ≥ 0` of degree `N` has `p̂(0) = 1` and
//! `p̂(1) ≥ 1/(1+ε)`. Products of rotated copies interpolate data of modulus
//! up to `p̂(1)` on any `(N+1)`-degree independent set.

use num_complex::Complex64;
use sidonlab::interpolate::{certify_family, riesz_interpolate, FamilyOptions, InterpolationOptions, Phi, Route};
use sidonlab::polynomial::{is_nonnegative, PeakKind};
use sidonlab::ElementSet;

fn main() -> sidonlab::Result<()> {
    let epsilon = 0.5;
    for kind in [PeakKind::Fejer, PeakKind::Triangle] {
        let peak = kind.build(epsilon)?;
        println!("{kind}: degree {}, p̂(1) = {:.6}", peak.degree, peak.peak_coefficient());
    }

    // Fejér: degree 2 for ε = 1/2, so the set must be 3-degree independent.
    let peak = PeakKind::Fejer.build(epsilon)?;
    let nonneg = is_nonnegative(&peak.to_polynomial(), 1e-9)?;
    println!("p >= 0 certified: {}, min seen {:e}", nonneg.certified, nonneg.min_sampled);

    let set = ElementSet::integers(&[5, 25, 125, 625]);
    let s = peak.peak_coefficient();
    let phi: Phi = set
        .elems
        .iter()
        .enumerate()
        .map(|(j, g)| (g.clone(), Complex64::from_polar(s, 0.7 * j as f64)))
        .collect();
    let out = riesz_interpolate(&set, &phi, &peak, &InterpolationOptions::default())?;
    println!(
        "P: {} terms, residual {:e}, implied bound {:?}",
        out.polynomial.len(),
        out.certificate.residual,
        out.certificate.implied_sidon_bound
    );

    let family = certify_family(&set, &Route::Peak(peak), &FamilyOptions::default())?;
    println!(
        "Sidon constant of {{5,25,125,625}} <= {} over {} patterns",
        family.implied_sidon_bound,
        family.sign_patterns + family.random_patterns
    );
    Ok(())
}
