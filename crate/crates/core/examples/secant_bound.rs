//! Two-element sets in groups of exponent p.
//!
//! If the quotient of two characters has order `p`, the best ratio
//! `(|α|+|β|)/sup|α + βξ|` over `p`-th roots `ξ` is at least `sec(π/(2p))`,
//! attained at `α = β` with a half-step rotation.

use sidonlab::sidon::two_element_constant_mod_p;

fn main() -> sidonlab::Result<()> {
    println!("{:>3}  {:>12}  {:>12}  {:>8}", "p", "found", "sec(π/2p)", "r");
    for p in [2, 3, 5, 7, 11, 13, 101] {
        let c = two_element_constant_mod_p(p)?;
        println!("{:>3}  {:>12.9}  {:>12.9}  {:>8.5}", p, c.value, c.bound, c.r);
    }
    Ok(())
}
