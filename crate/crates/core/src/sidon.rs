//! Sidon-constant bounds and numerical checks of the inequalities around them.
//!
//! Lower bounds come from the dual characterization: for any polynomial `f`
//! supported in `E`, `Σ|f̂| / ‖f‖_∞` is at most the Sidon constant. Dividing by
//! a certified upper bound on `‖f‖_∞` keeps the ratio a true lower bound, so
//! the search strategy only affects how good the bound is, never whether it is
//! valid. Upper bounds come from Riesz-product interpolation certificates.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{DualPoint, ElementOrder, ElementSet, GroupElement};
use crate::interpolate::{certify_family, FamilyCertificate, FamilyOptions, Route};
use crate::polynomial::{lp_norm, sup_norm_bounds, PeakKind, SupNormBound, TrigPolynomial};
use crate::relations::{relation_mass, RelationMass, RelationOptions};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessTerm {
    pub elem: GroupElement,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SidonEstimate {
    pub lower: f64,
    /// False when the sup-norm could not be certified (free rank above 2); the
    /// lower value is then only an estimate.
    pub lower_certified: bool,
    pub upper: Option<f64>,
    /// The upper bound rests on every sign pattern, not only a sample.
    pub upper_unconditional: bool,
    /// Coefficients of the best polynomial found, in canonical element order.
    pub witness: Vec<WitnessTerm>,
    pub witness_sup: Option<SupNormBound>,
    pub evaluations: usize,
    pub method: &'static str,
    pub family: Option<FamilyCertificate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBoundOptions {
    /// Random unimodular starting vectors.
    pub trials: usize,
    pub seed: u64,
    pub grid_multiplier: u32,
    /// Rounds of coordinate search around the best vector.
    pub descent_rounds: usize,
}

impl Default for LowerBoundOptions {
    fn default() -> Self {
        LowerBoundOptions {
            trials: 64,
            seed: 0,
            grid_multiplier: 64,
            descent_rounds: 24,
        }
    }
}

struct Scored {
    ratio: f64,
    coeffs: Vec<Complex64>,
    sup: SupNormBound,
}

fn polynomial_of(set: &ElementSet, elems: &[GroupElement], coeffs: &[Complex64]) -> Result<TrigPolynomial> {
    TrigPolynomial::from_terms(set.spec.clone(), elems.iter().cloned().zip(coeffs.iter().copied()))
}

fn score(set: &ElementSet, elems: &[GroupElement], coeffs: &[Complex64], grid: u32) -> Result<Scored> {
    let p = polynomial_of(set, elems, coeffs)?;
    let sup = sup_norm_bounds(&p, grid)?;
    let mass: f64 = coeffs.iter().map(|c| c.norm()).sum();
    let denom = if sup.certified { sup.upper } else { sup.lower };
    let ratio = if denom > 0.0 { mass / denom } else { 0.0 };
    Ok(Scored {
        ratio,
        coeffs: coeffs.to_vec(),
        sup,
    })
}

/// Best of a batch; ties go to the earliest candidate.
fn best_of(set: &ElementSet, elems: &[GroupElement], batch: &[Vec<Complex64>], grid: u32) -> Result<Option<Scored>> {
    let scored: Vec<Scored> = batch
        .par_iter()
        .map(|c| score(set, elems, c, grid))
        .collect::<Result<_>>()?;
    let mut best: Option<Scored> = None;
    for s in scored {
        if best.as_ref().is_none_or(|b| s.ratio > b.ratio) {
            best = Some(s);
        }
    }
    Ok(best)
}

/// Certified lower bound on the Sidon constant of `E`.
///
/// Candidates: each indicator vector, every sign pattern when `|E| ≤ 12`,
/// `trials` random unimodular vectors, then coordinate search on phases and
/// moduli around the best one.
pub fn sidon_lower_bound(set: &ElementSet, opts: &LowerBoundOptions) -> Result<SidonEstimate> {
    sidon_lower_bound_with_pool(set, &[], opts)
}

/// As [`sidon_lower_bound`], also trying the given coefficient vectors. Terms
/// on elements outside `E` are dropped and missing elements get coefficient 0,
/// so a witness found for a subset of `E` carries over unchanged.
pub fn sidon_lower_bound_with_pool(
    set: &ElementSet,
    pool: &[Vec<WitnessTerm>],
    opts: &LowerBoundOptions,
) -> Result<SidonEstimate> {
    let mut elems = set.elems.clone();
    elems.sort();
    let k = elems.len();
    if k == 0 {
        return Ok(SidonEstimate {
            lower: 1.0,
            lower_certified: true,
            upper: Some(1.0),
            upper_unconditional: true,
            witness: Vec::new(),
            witness_sup: None,
            evaluations: 0,
            method: "empty",
            family: None,
        });
    }
    let grid = opts.grid_multiplier;
    let mut candidates: Vec<Vec<Complex64>> = Vec::new();
    for i in 0..k {
        let mut v = vec![Complex64::zero(); k];
        v[i] = Complex64::one();
        candidates.push(v);
    }
    if k <= 12 {
        for bits in 0u32..(1 << (k - 1)) {
            candidates.push(
                (0..k)
                    .map(|j| if j > 0 && (bits >> (j - 1)) & 1 == 1 { -Complex64::one() } else { Complex64::one() })
                    .collect(),
            );
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.trials {
        candidates.push(
            (0..k)
                .map(|_| Complex64::from_polar(1.0, 2.0 * PI * rng.gen::<f64>()))
                .collect(),
        );
    }
    for w in pool {
        let v: Vec<Complex64> = elems
            .iter()
            .map(|g| {
                w.iter()
                    .find(|t| &t.elem == g)
                    .map_or(Complex64::zero(), |t| Complex64::new(t.re, t.im))
            })
            .collect();
        if v.iter().any(|c| !c.is_zero()) {
            candidates.push(v);
        }
    }
    let mut evaluations = candidates.len();
    let mut best = best_of(set, &elems, &candidates, grid)?.expect("nonempty candidate list");

    let mut step = 0.125;
    for _ in 0..opts.descent_rounds {
        let mut moves = Vec::new();
        for j in 0..k {
            for dir in [1.0, -1.0] {
                let mut v = best.coeffs.clone();
                v[j] *= Complex64::from_polar(1.0, 2.0 * PI * step * dir);
                moves.push(v);
                let mut v = best.coeffs.clone();
                v[j] *= 1.0 + step * dir;
                moves.push(v);
            }
        }
        evaluations += moves.len();
        let round = best_of(set, &elems, &moves, grid)?.expect("nonempty move list");
        if round.ratio > best.ratio {
            best = round;
        } else {
            step *= 0.5;
        }
    }

    let certified = best.sup.certified;
    Ok(SidonEstimate {
        lower: best.ratio,
        lower_certified: certified,
        upper: None,
        upper_unconditional: false,
        witness: elems
            .iter()
            .zip(&best.coeffs)
            .map(|(g, c)| WitnessTerm {
                elem: g.clone(),
                re: c.re,
                im: c.im,
            })
            .collect(),
        witness_sup: Some(best.sup),
        evaluations,
        method: if certified { "certified-grid-search" } else { "sampled-search" },
        family: None,
    })
}

/// Upper bound from Riesz interpolation over the test family.
pub fn sidon_upper_bound(set: &ElementSet, route: &Route, family: &FamilyOptions) -> Result<SidonEstimate> {
    let cert = certify_family(set, route, family)?;
    Ok(SidonEstimate {
        lower: 1.0,
        lower_certified: true,
        upper: Some(cert.implied_sidon_bound),
        upper_unconditional: cert.unconditional,
        witness: Vec::new(),
        witness_sup: None,
        evaluations: cert.sign_patterns + cert.random_patterns,
        method: match route {
            Route::Classic => "classic-riesz-family",
            Route::Peak(_) => "peak-riesz-family",
        },
        family: Some(cert),
    })
}

/// Upper bound `1 + ε` (up to the residual correction) via peak-polynomial
/// Riesz products; `H` must be `(N+1)`-degree independent.
pub fn sidon_upper_bound_via_riesz(
    set: &ElementSet,
    epsilon: f64,
    kind: PeakKind,
    family: &FamilyOptions,
) -> Result<SidonEstimate> {
    let peak = kind.build(epsilon)?;
    sidon_upper_bound(set, &Route::Peak(peak), family)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoElementConstant {
    pub p: u64,
    /// Best value of `(1+r)/max_{ξ^p=1}|1 + r e^{iθ} ξ|` found.
    pub value: f64,
    /// `sec(π/(2p))`.
    pub bound: f64,
    pub r: f64,
    pub theta: f64,
    pub meets_bound: bool,
}

fn two_element_ratio(p: u64, r: f64, theta: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..p {
        let angle = theta + 2.0 * PI * j as f64 / p as f64;
        worst = worst.max((Complex64::one() + Complex64::from_polar(r, angle)).norm());
    }
    (1.0 + r) / worst
}

/// Lower bound for the Sidon constant of a two-element set whose quotient has
/// order `p`, by maximizing over `α = 1`, `β = r e^{iθ}`.
///
/// By symmetry `r ∈ [0, 1]` and `θ ∈ [0, 2π/p)`. The coarse grid has an even
/// number of angle steps so that `θ = π/p` is a grid point; a shrinking local
/// search follows.
pub fn two_element_constant_mod_p(p: u64) -> Result<TwoElementConstant> {
    if p < 2 {
        return Err(Error::domain(format!("p must be at least 2, got {p}")));
    }
    const R_STEPS: usize = 64;
    const THETA_STEPS: usize = 64;
    let period = 2.0 * PI / p as f64;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..=R_STEPS {
        let r = i as f64 / R_STEPS as f64;
        for j in 0..THETA_STEPS {
            let theta = period * j as f64 / THETA_STEPS as f64;
            let v = two_element_ratio(p, r, theta);
            if v > best.0 {
                best = (v, r, theta);
            }
        }
    }
    let (mut dr, mut dt) = (1.0 / R_STEPS as f64, period / THETA_STEPS as f64);
    for _ in 0..40 {
        let (_, r0, t0) = best;
        let mut improved = false;
        for a in -2i32..=2 {
            for b in -2i32..=2 {
                let r = (r0 + a as f64 * dr / 2.0).clamp(0.0, 1.0);
                let t = t0 + b as f64 * dt / 2.0;
                let v = two_element_ratio(p, r, t);
                if v > best.0 {
                    best = (v, r, t.rem_euclid(period));
                    improved = true;
                }
            }
        }
        if !improved {
            dr /= 2.0;
            dt /= 2.0;
        }
    }
    let bound = 1.0 / (PI / (2.0 * p as f64)).cos();
    Ok(TwoElementConstant {
        p,
        value: best.0,
        bound,
        r: best.1,
        theta: best.2,
        meets_bound: best.0 >= bound - 1e-6,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerSetCheck {
    pub m: i64,
    pub trials: usize,
    /// `(ratio for E, ratio for E_m)` per trial.
    pub ratios: Vec<(f64, f64)>,
    pub max_discrepancy: f64,
    pub grid_multiplier: u32,
    pub seed: u64,
}

/// Compares the certified ratios `Σ|a|/U` of `f = Σ a_γ γ` and of
/// `f_m = Σ a_γ γ^m` for random coefficient vectors. The two functions differ
/// by the measure-preserving map `x ↦ mx`, so the sup-norms coincide.
pub fn power_set_constant_check(
    set: &ElementSet,
    m: i64,
    trials: usize,
    seed: u64,
    grid_multiplier: u32,
) -> Result<PowerSetCheck> {
    if !set.spec.is_torsion_free() {
        return Err(Error::domain(format!(
            "the power-set comparison needs a torsion-free group, got {}",
            set.spec
        )));
    }
    let powered = set.spec.power_set(&set.elems, m)?;
    if powered.collisions {
        return Err(Error::domain(format!("{m}-th powers collide")));
    }
    let elems = set.elems.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors: Vec<Vec<Complex64>> = (0..trials)
        .map(|_| {
            (0..elems.len())
                .map(|_| {
                    let modulus = 1.0 - rng.gen::<f64>();
                    Complex64::from_polar(modulus, 2.0 * PI * rng.gen::<f64>())
                })
                .collect()
        })
        .collect();
    let ratios: Vec<(f64, f64)> = vectors
        .par_iter()
        .map(|a| -> Result<(f64, f64)> {
            let r1 = score(set, &elems, a, grid_multiplier)?.ratio;
            let r2 = score(set, &powered.elems, a, grid_multiplier)?.ratio;
            Ok((r1, r2))
        })
        .collect::<Result<_>>()?;
    let max_discrepancy = ratios.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(PowerSetCheck {
        m,
        trials,
        ratios,
        max_discrepancy,
        grid_multiplier,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpMoment {
    /// `∫ exp(Σ a_γ Re γ(x)) dx`.
    pub lhs: f64,
    pub sum_squares: f64,
    /// Smallest `K` with `lhs ≤ exp(K Σ a²)`; zero when `a = 0`.
    pub fitted_k: f64,
    pub mode: &'static str,
    pub points: u64,
}

/// Points touched by the integration in [`exp_moment_check`].
const MOMENT_POINT_CAP: u64 = 50_000_000;

/// Numerically integrates `exp(Σ a_γ Re γ)` and fits the constant `K`.
///
/// Free rank 0 and 1 are integrated on a uniform grid (exact enumeration for
/// torsion coordinates, `grid` points in the free coordinate); larger ranks use
/// `grid` quasi-random points and are flagged.
pub fn exp_moment_check(set: &ElementSet, a: &[f64], grid: usize) -> Result<ExpMoment> {
    if a.len() != set.len() {
        return Err(Error::domain(format!(
            "{} weights given for {} elements",
            a.len(),
            set.len()
        )));
    }
    if grid == 0 {
        return Err(Error::config("integration grid must be nonempty"));
    }
    let spec = &set.spec;
    let dim = spec.free_rank();
    let touched: Vec<usize> = (0..spec.moduli().len())
        .filter(|&i| set.elems.iter().any(|g| g.torsion_coords()[i] != 0))
        .collect();
    let torsion_points: u64 = touched
        .iter()
        .try_fold(1u64, |acc, &i| acc.checked_mul(spec.moduli()[i]))
        .unwrap_or(u64::MAX);
    let (free_points, mode) = match dim {
        0 => (1u64, "exact"),
        1 => (grid as u64, "quadrature"),
        _ => (grid as u64, "quasi-monte-carlo"),
    };
    let points = torsion_points.saturating_mul(free_points);
    if points > MOMENT_POINT_CAP {
        return Err(Error::resource("integration points", MOMENT_POINT_CAP, points));
    }

    let steps: Vec<f64> = (0..dim).map(|i| ((i + 2) as f64).sqrt().fract()).collect();
    let mut total = 0.0;
    let mut torsion = vec![0u64; spec.moduli().len()];
    loop {
        for j in 0..free_points {
            let free: Vec<f64> = match dim {
                0 => Vec::new(),
                1 => vec![j as f64 / grid as f64],
                _ => steps.iter().map(|s| ((j + 1) as f64 * s).fract()).collect(),
            };
            let x = DualPoint {
                free,
                torsion: torsion.clone(),
            };
            let exponent: f64 = set
                .elems
                .iter()
                .zip(a)
                .map(|(g, w)| w * (2.0 * PI * spec.phase(g, &x)).cos())
                .sum();
            total += exponent.exp();
        }
        let mut advanced = false;
        for &i in &touched {
            torsion[i] += 1;
            if torsion[i] < spec.moduli()[i] {
                advanced = true;
                break;
            }
            torsion[i] = 0;
        }
        if !advanced {
            break;
        }
    }
    let lhs = total / points as f64;
    let sum_squares: f64 = a.iter().map(|w| w * w).sum();
    Ok(ExpMoment {
        lhs,
        sum_squares,
        fitted_k: if sum_squares > 0.0 { lhs.ln() / sum_squares } else { 0.0 },
        mode,
        points,
    })
}

/// `∫ ∏_{γ∈A} (1 + λ Σ_{k=1}^n Re γ^k)`, exactly.
///
/// Expanding `Re γ^k = (γ^k + γ^{−k})/2` turns the integral into the weighted
/// relation count `Σ_ξ (λ/2)^{#supp ξ}`.
pub fn product_integral(set: &ElementSet, n: u32, lambda: &BigRational, opts: &RelationOptions) -> Result<RelationMass> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let upper = BigRational::new(1.into(), n.into());
    if !(lambda > &BigRational::zero() && lambda < &upper) {
        return Err(Error::domain(format!("λ must lie in (0, 1/{n}), got {lambda}")));
    }
    for g in &set.elems {
        if let ElementOrder::Finite(o) = set.spec.order_unchecked(g) {
            if o <= n as u64 {
                return Err(Error::domain(format!(
                    "{g} has order {o} <= n = {n}; the product integral needs every element of order greater than n"
                )));
            }
        }
    }
    relation_mass(set, n, lambda, opts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaPCheck {
    pub p: u32,
    pub sidon_constant: f64,
    pub trials: usize,
    /// Largest `‖f‖_p / (2S√p ‖f‖₂)` seen.
    pub worst_ratio: f64,
    pub grid: usize,
    pub seed: u64,
}

/// Checks `‖f‖_p ≤ 2S√p ‖f‖₂` on random polynomials supported in `E`.
///
/// For even `p` the quadrature is exact: `|f|^p` is a polynomial whose
/// frequencies stay below the grid size.
pub fn lambda_p_check(set: &ElementSet, sidon_constant: f64, p: u32, trials: usize, seed: u64) -> Result<LambdaPCheck> {
    if p < 2 || p % 2 == 1 {
        return Err(Error::domain(format!("p must be an even integer >= 2, got {p}")));
    }
    if set.spec.free_rank() > 1 {
        return Err(Error::domain("the L^p check supports free rank at most 1"));
    }
    let spread = set
        .elems
        .iter()
        .flat_map(|g| g.free_coords().iter())
        .map(|k| k.magnitude().clone())
        .max()
        .map(|m| num_traits::ToPrimitive::to_u64(&m).unwrap_or(u64::MAX))
        .unwrap_or(0);
    let grid = (p as u64)
        .saturating_mul(spread)
        .saturating_add(1)
        .max(16);
    let grid = usize::try_from(grid).map_err(|_| Error::resource("L^p quadrature points", u32::MAX as u64, grid))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors: Vec<Vec<Complex64>> = (0..trials)
        .map(|_| {
            set.elems
                .iter()
                .map(|_| {
                    let modulus = 1.0 - rng.gen::<f64>();
                    Complex64::from_polar(modulus, 2.0 * PI * rng.gen::<f64>())
                })
                .collect()
        })
        .collect();
    let factor = 2.0 * sidon_constant * (p as f64).sqrt();
    let ratios: Vec<f64> = vectors
        .par_iter()
        .map(|a| -> Result<f64> {
            let f = polynomial_of(set, &set.elems, a)?;
            let lp = lp_norm(&f, p as f64, grid)?;
            Ok(lp / (factor * f.l2_norm()))
        })
        .collect::<Result<_>>()?;
    Ok(LambdaPCheck {
        p,
        sidon_constant,
        trials,
        worst_ratio: ratios.into_iter().fold(0.0, f64::max),
        grid,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    #[test]
    fn singletons_and_pairs() {
        let opts = LowerBoundOptions {
            trials: 8,
            descent_rounds: 4,
            ..Default::default()
        };
        let one = sidon_lower_bound(&ElementSet::integers(&[7]), &opts).unwrap();
        assert!((one.lower - 1.0).abs() < 1e-9 && one.lower <= 1.0 + 1e-12);
        let two = sidon_lower_bound(&ElementSet::integers(&[1, 2]), &opts).unwrap();
        assert!(two.lower >= 1.0 - 1e-9 && two.lower <= 1.0 + 1e-9, "{}", two.lower);
    }

    #[test]
    fn three_elements_exceed_one() {
        let est = sidon_lower_bound(&ElementSet::integers(&[1, 2, 3]), &LowerBoundOptions::default()).unwrap();
        assert!(est.lower_certified);
        assert!(est.lower > 1.3, "{}", est.lower);
    }

    #[test]
    fn sec_bounds() {
        let two = two_element_constant_mod_p(2).unwrap();
        assert!(two.meets_bound && (two.value - 2f64.sqrt()).abs() < 1e-9);
        let three = two_element_constant_mod_p(3).unwrap();
        assert!(three.value >= 1.154700);
        assert!(two_element_constant_mod_p(1).is_err());
    }

    #[test]
    fn power_set_ratios_match() {
        let r = power_set_constant_check(&ElementSet::integers(&[1, 2, 5]), 3, 10, 1, 64).unwrap();
        assert!(r.max_discrepancy < 1e-9, "{}", r.max_discrepancy);
        let spec = GroupSpec::new(0, vec![5]).unwrap();
        let t = ElementSet::new(spec.clone(), vec![spec.torsion_element(&[1]).unwrap()]).unwrap();
        assert!(power_set_constant_check(&t, 2, 1, 0, 64).is_err());
    }

    #[test]
    fn exp_moment_matches_bessel() {
        // I₀(t) = Σ (t/2)^{2j} / (j!)²
        let t = 1.5f64;
        let mut i0 = 0.0;
        let mut term = 1.0;
        for j in 0..40 {
            if j > 0 {
                term *= (t / 2.0) * (t / 2.0) / (j as f64 * j as f64);
            }
            i0 += term;
        }
        let m = exp_moment_check(&ElementSet::integers(&[3]), &[t], 256).unwrap();
        assert!((m.lhs - i0).abs() < 1e-12, "{} vs {i0}", m.lhs);
        assert!(m.fitted_k <= 0.25);
        let empty = exp_moment_check(&ElementSet::integers(&[]), &[], 16).unwrap();
        assert_eq!((empty.lhs, empty.fitted_k), (1.0, 0.0));
    }

    #[test]
    fn product_integral_values() {
        let tenth = BigRational::new(1.into(), 10.into());
        let v = product_integral(&ElementSet::integers(&[1, 2, 3]), 1, &tenth, &Default::default()).unwrap();
        assert_eq!(v.exact, BigRational::new(100025.into(), 100000.into()));
        let spec = GroupSpec::new(0, vec![2]).unwrap();
        let t = ElementSet::new(spec.clone(), vec![spec.torsion_element(&[1]).unwrap()]).unwrap();
        assert!(product_integral(&t, 2, &tenth, &Default::default()).is_err());
        assert!(product_integral(&ElementSet::integers(&[1]), 2, &BigRational::one(), &Default::default()).is_err());
    }

    #[test]
    fn lambda_p_single_character() {
        let r = lambda_p_check(&ElementSet::integers(&[4]), 2.0, 4, 3, 0).unwrap();
        assert!((r.worst_ratio - 1.0 / 8.0).abs() < 1e-12);
    }
}
