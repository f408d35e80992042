//! Counting exponent relations and testing independence.
//!
//! `C_n(F)` counts the vectors `ξ ∈ {0, ±1, …, ±n}^F` with `Σ ξ_γ γ = 0`. The
//! zero vector always counts, so a set is n-degree independent exactly when
//! every counted vector is trivial.

use sidonlab::relations::{
    count_relations, find_relations, is_dissociate, is_n_length_independent, is_quasi_independent, relation_mass,
    RelationOptions,
};
use sidonlab::{ElementSet, GroupSpec};

fn main() -> sidonlab::Result<()> {
    let opts = RelationOptions::default();

    let small = ElementSet::integers(&[1, 2, 3]);
    let report = count_relations(&small, 1, &opts)?;
    println!(
        "{{1,2,3}}, n=1: count {} (trivial {}), method {:?}",
        report.count, report.trivial_count, report.method
    );
    for rel in find_relations(&small, 2, 10, &opts)? {
        println!("  degree-2 relation: {rel}");
    }

    let powers = ElementSet::integers(&[3, 9, 27, 81, 243]);
    println!(
        "powers of 3: quasi-independent {}, dissociate {}",
        is_quasi_independent(&powers)?,
        is_dissociate(&powers)?
    );
    // Exponent 3 on 3^k equals exponent 1 on 3^(k+1).
    println!("  3-degree relations: {}", count_relations(&powers, 3, &opts)?.count);

    let length = is_n_length_independent(&ElementSet::integers(&[1, 2, 4, 8]), 3, &opts)?;
    println!("{{1,2,4,8}} 3-length independent: {}", length.independent);

    // In Z_7, the element 1 satisfies 7·1 = 0 but no relation with |m| <= 3.
    let z7 = GroupSpec::new(0, vec![7])?;
    let torsion = ElementSet::new(z7.clone(), vec![z7.torsion_element(&[1])?, z7.torsion_element(&[3])?])?;
    let t = count_relations(&torsion, 3, &opts)?;
    println!("{{1,3}} in Z_7, n=3: count {}, independent {}", t.count, t.independent);

    let lambda = num_rational::BigRational::new(1.into(), 10.into());
    let mass = relation_mass(&small, 1, &lambda, &opts)?;
    println!("weighted count at λ=1/10: {} = {}", mass.exact, mass.value);
    Ok(())
}
