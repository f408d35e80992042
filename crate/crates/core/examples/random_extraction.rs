//! Randomized extraction of an independent subset.
//!
//! Each element survives with probability λ/2. An attempt is accepted when the
//! thinned set is large enough and carries few relations; relations are then
//! removed greedily, leaving an n-degree independent subset.

use sidonlab::extract::{expected_relation_count, extract_independent_subset, ExtractionParams};
use sidonlab::relations::{count_relations, RelationOptions};
use sidonlab::ElementSet;

fn main() -> sidonlab::Result<()> {
    let values: Vec<i64> = (1..=40).collect();
    let set = ElementSet::integers(&values);
    let n = 1;

    let mut params = ExtractionParams::new(n);
    params.lambda = 0.25;
    params.seed = 2024;

    let expected = expected_relation_count(&set, n, params.lambda, &RelationOptions::default())?;
    println!("E[C_1(F(ω))] = {} ≈ {:.6}", expected.exact, expected.value);

    let result = extract_independent_subset(&set, &params)?;
    println!(
        "kept {} of {} (ratio {:.3}) from attempt {:?}; gates failed: {}",
        result.h.len(),
        set.len(),
        result.achieved_ratio,
        result.chosen_attempt,
        result.gates_failed
    );
    for a in result.attempts.iter().take(5) {
        println!(
            "  attempt {:2}: |F(ω)| = {:2}, C = {:>4}, gates {}/{}",
            a.attempt, a.thinned_size, a.relation_count, a.size_gate, a.relation_gate
        );
    }

    let check = count_relations(&result.h, n, &RelationOptions::default())?;
    println!("H = {:?}, independent: {}", result.h.elems.iter().map(|g| g.to_string()).collect::<Vec<_>>(), check.independent);
    Ok(())
}
