//! Two-sided bounds on Sidon constants.

use sidonlab::interpolate::FamilyOptions;
use sidonlab::polynomial::PeakKind;
use sidonlab::sidon::{sidon_lower_bound, sidon_lower_bound_with_pool, sidon_upper_bound_via_riesz, LowerBoundOptions};
use sidonlab::ElementSet;

fn main() -> sidonlab::Result<()> {
    let opts = LowerBoundOptions::default();

    // Any two-element subset of Z has constant 1; three elements never do.
    for values in [&[1, 2][..], &[1, 2, 3], &[1, 3, 9], &[1, 2, 4, 8]] {
        let set = ElementSet::integers(values);
        let est = sidon_lower_bound(&set, &opts)?;
        println!("{values:?}: constant >= {:.6} (certified {})", est.lower, est.lower_certified);
    }

    // A witness for a subset carries over to any superset.
    let sub = sidon_lower_bound(&ElementSet::integers(&[1, 2, 3]), &opts)?;
    let sup = sidon_lower_bound_with_pool(&ElementSet::integers(&[1, 2, 3, 7]), &[sub.witness.clone()], &opts)?;
    println!("{{1,2,3,7}} >= {:.6} (subset gave {:.6})", sup.lower, sub.lower);

    let h = ElementSet::integers(&[7, 49, 343]);
    let upper = sidon_upper_bound_via_riesz(&h, 0.25, PeakKind::Fejer, &FamilyOptions::default())?;
    let lower = sidon_lower_bound(&h, &opts)?;
    println!("{{7,49,343}}: {:.6} <= constant <= {:?}", lower.lower, upper.upper);
    Ok(())
}
