//! Certified sup-norms and nonnegativity.
//!
//! Sampling `|P|` on a grid of `M` points per unit of frequency spread `N`
//! misses at most a factor `1/(1 − πN/M)`, which turns the sampled maximum
//! into a rigorous upper bound.

use num_complex::Complex64;
use sidonlab::polynomial::{is_nonnegative, sup_norm_bounds};
use sidonlab::{GroupElement, GroupSpec, TrigPolynomial};

fn main() -> sidonlab::Result<()> {
    let z = GroupSpec::integers();
    let p = TrigPolynomial::from_terms(
        z.clone(),
        [(1, 1.0), (2, 1.0), (3, -1.0)]
            .into_iter()
            .map(|(k, v)| (GroupElement::integer(k), Complex64::new(v, 0.0))),
    )?;
    for g in [8, 64, 1024] {
        let b = sup_norm_bounds(&p, g)?;
        println!("grid x{g:<5} {:.9} <= sup|P| <= {:.9}", b.lower, b.upper);
    }
    println!("Σ|P̂| / upper = {:.6}", p.coefficient_l1() / sup_norm_bounds(&p, 1024)?.upper);

    // Two free coordinates: 1 + cos(2πx) + cos(2πy) dips to -1.
    let z2 = GroupSpec::new(2, vec![])?;
    let half = Complex64::new(0.5, 0.0);
    let q = TrigPolynomial::from_terms(
        z2.clone(),
        vec![
            (z2.identity(), Complex64::new(1.0, 0.0)),
            (z2.free_element(&[1, 0])?, half),
            (z2.free_element(&[-1, 0])?, half),
            (z2.free_element(&[0, 1])?, half),
            (z2.free_element(&[0, -1])?, half),
        ],
    )?;
    let cert = is_nonnegative(&q, 1e-9)?;
    println!("1 + cos x + cos y >= 0: {} (min seen {:.6} at {:?})", cert.certified, cert.min_sampled, cert.witness.free);
    Ok(())
}
