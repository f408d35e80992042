//! Riesz-product interpolation.
//!
//! Given a set `H` and target values `φ` on it, build a nonnegative polynomial
//! `P` with `P̂(𝟏) = 1` and `P̂(γ) = φ(γ)` on `H`. Since `P ≥ 0`, its total mass
//! `‖P‖₁` equals `P̂(𝟏)`, so `P` interpolates `φ` with a measure of mass one.
//!
//! Two constructions are provided. The classic one multiplies the factors
//! `1 + φ(γ)γ + conj(φ(γ))γ⁻¹` and needs `H` dissociate with `|φ| ≤ ½`. The peak
//! construction multiplies the factors `P_γ` built from a peak polynomial `p` of
//! degree `N`. It needs `H` to be `(N+1)`-degree independent and allows
//! `|φ| ≤ p̂(1)`, which can be made as close to one as desired.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{ElementOrder, ElementSet, GroupElement, GroupSpec};
use crate::polynomial::{
    is_nonnegative_with, lp_norm, MultiplyOptions, NonnegCertificate, NonnegOptions, PeakPolynomial,
    TrigPolynomial,
};
use crate::relations::{find_relation, RelationOptions};

/// Target values `φ(γ)`; elements not listed are treated as `φ(γ) = 0`.
pub type Phi = BTreeMap<GroupElement, Complex64>;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Relative slack allowed when comparing `|φ|` with its ceiling.
const MODULUS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpolationCertificate {
    /// `max_γ |P̂(γ) − φ(γ)|` over the interpolation set.
    pub residual: f64,
    /// `P̂(𝟏)`.
    pub mass_at_identity: Complex64,
    pub real_valued: bool,
    /// Absent when `P` is not real-valued. Under factorwise positivity,
    /// `min_sampled` is the smallest sampled factor value, `witness` is unused
    /// and `lower_bound` is the bound implied for the product.
    pub nonneg: Option<NonnegCertificate>,
    pub positivity: Positivity,
    /// `‖P‖₁`: exactly `Re P̂(𝟏)` when positivity is certified, otherwise a
    /// quadrature estimate.
    pub l1_mass: f64,
    pub l1_is_estimate: bool,
    /// `max_γ |φ(γ)|`.
    pub phi_sup: f64,
    /// When `φ` has constant modulus `s` and positivity is certified:
    /// `(‖P‖₁/s) / (1 − residual/s)`, the Sidon bound this single interpolation
    /// supports for unimodular data proportional to `φ`.
    pub implied_sidon_bound: Option<f64>,
}

impl InterpolationCertificate {
    /// Positivity certified, residual and mass within the given tolerances.
    pub fn is_valid(&self, residual_tol: f64, mass_tol: f64) -> bool {
        self.residual <= residual_tol
            && (self.mass_at_identity - one()).norm() <= mass_tol
            && self.nonneg.as_ref().is_some_and(|c| c.certified)
    }
}

/// How positivity of a product `P = ∏ P_γ` is established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Positivity {
    /// Each factor depends on `x` only through `γ(x)`, so it is certified as a
    /// polynomial on the circle; a product of nonnegative factors is nonnegative.
    #[default]
    Factorwise,
    /// Branch-and-bound on the expanded product. Slow when factors have zeros.
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub nonneg: NonnegOptions,
    /// Ignored by [`verify_interpolation`], which only sees the product.
    pub positivity: Positivity,
    /// Quadrature points per unit of degree for `‖P‖₁` when positivity is not
    /// certified.
    pub quadrature_multiplier: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            nonneg: NonnegOptions::default(),
            positivity: Positivity::default(),
            quadrature_multiplier: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InterpolationOptions {
    pub multiply: MultiplyOptions,
    pub verify: VerifyOptions,
    pub relations: RelationOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interpolation {
    pub polynomial: TrigPolynomial,
    pub certificate: InterpolationCertificate,
}

fn phi_at(phi: &Phi, g: &GroupElement) -> Complex64 {
    phi.get(g).copied().unwrap_or_else(zero)
}

fn check_phi(set: &ElementSet, phi: &Phi) -> Result<()> {
    for (g, v) in phi {
        set.spec.check(g)?;
        if !set.elems.contains(g) {
            return Err(Error::domain(format!("φ is given at {g}, which is not in the set")));
        }
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::domain(format!("φ({g}) = {v} is not finite")));
        }
    }
    Ok(())
}

fn phi_sup(phi: &Phi) -> f64 {
    phi.values().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `∏_γ (1 + φ(γ)γ + conj(φ(γ))γ⁻¹)` for a dissociate set and `|φ| ≤ ½`.
pub fn classic_riesz_product(set: &ElementSet, phi: &Phi, opts: &InterpolationOptions) -> Result<TrigPolynomial> {
    check_phi(set, phi)?;
    let sup = phi_sup(phi);
    if sup > 0.5 * (1.0 + MODULUS_SLACK) {
        return Err(Error::domain(format!(
            "the classic Riesz product needs |φ| <= 1/2, got {sup}"
        )));
    }
    for g in &set.elems {
        if let ElementOrder::Finite(o) = set.spec.order_unchecked(g) {
            if o <= 2 {
                return Err(Error::domain(format!(
                    "{g} has order {o}, so γ and γ⁻¹ coincide and the product cannot interpolate"
                )));
            }
        }
    }
    if let Some(rel) = find_relation(set, 2, &opts.relations)? {
        return Err(Error::NotIndependent {
            degree: 2,
            relation: rel.to_string(),
        });
    }
    let factors: Vec<TrigPolynomial> = nonzero_values(set, phi)
        .map(|(g, v)| classic_factor(&set.spec, &g, v))
        .collect();
    product(&set.spec, factors, opts)
}

fn classic_factor(spec: &GroupSpec, g: &GroupElement, v: Complex64) -> TrigPolynomial {
    let mut f = TrigPolynomial::constant(spec.clone(), one());
    f.set_coefficient(spec.neg(g), v.conj());
    f.set_coefficient(g.clone(), v);
    f
}

fn nonzero_values<'a>(set: &ElementSet, phi: &'a Phi) -> impl Iterator<Item = (GroupElement, Complex64)> + 'a {
    sorted(&set.elems)
        .into_iter()
        .map(move |g| {
            let v = phi_at(phi, &g);
            (g, v)
        })
        .filter(|(_, v)| *v != zero())
}

/// The factors as polynomials in one circle variable `t`, standing for `γ(x)`.
fn circle_factors(phi: &Phi, set: &ElementSet, peak: Option<&PeakPolynomial>) -> Result<Vec<TrigPolynomial>> {
    let z = GroupSpec::integers();
    let t = GroupElement::integer(1);
    nonzero_values(set, phi)
        .map(|(_, v)| match peak {
            Some(p) => factor_polynomial(&z, &t, v, p),
            None => Ok(classic_factor(&z, &t, v)),
        })
        .collect()
}

/// Lower bound for a product from lower bounds on its factors. With factor
/// values in `[lb_i, S_i]`, where `S_i = Σ|Q̂_i|`, a negative product needs a
/// negative factor, so it is at least `−max_i t_i · ∏_j max(S_j, t_j, 1)` with
/// `t_i = max(−lb_i, 0)`. Factors are certified to the tolerance divided by
/// `∏ max(S_j, 1)` so that this bound can meet the requested tolerance.
fn factorwise_nonneg(spec: &GroupSpec, factors: &[TrigPolynomial], opts: &NonnegOptions) -> Result<NonnegCertificate> {
    let sup_product: f64 = factors.iter().map(|q| q.coefficient_l1().max(1.0)).product();
    let factor_opts = NonnegOptions {
        tolerance: opts.tolerance / sup_product,
        ..*opts
    };
    let certs: Vec<NonnegCertificate> = factors
        .par_iter()
        .map(|q| is_nonnegative_with(q, &factor_opts))
        .collect::<Result<_>>()?;
    let worst_deficit = certs.iter().map(|c| (-c.lower_bound).max(0.0)).fold(0.0, f64::max);
    let lower_bound = if worst_deficit == 0.0 {
        certs.iter().map(|c| c.lower_bound).product()
    } else {
        let spread: f64 = factors
            .iter()
            .zip(&certs)
            .map(|(q, c)| q.coefficient_l1().max(-c.lower_bound).max(1.0))
            .product();
        -worst_deficit * spread
    };
    Ok(NonnegCertificate {
        min_sampled: certs.iter().map(|c| c.min_sampled).fold(f64::INFINITY, f64::min).min(1.0),
        lower_bound,
        certified: certs.iter().all(|c| c.certified) && lower_bound >= -opts.tolerance,
        tolerance: opts.tolerance,
        witness: spec.origin(),
        cells: certs.iter().map(|c| c.cells).sum(),
    })
}

/// `P_γ = w·Σ_{|m|≤N} p̂(m) u^m γ^m + (1 − w)` with `u = φ/|φ|` and `w = |φ|/p̂(1)`.
///
/// `P̂_γ(𝟏) = 1` and `P̂_γ(γ) = φ` hold by construction and are stored exactly.
/// `P_γ ≥ 0` because it is a convex blend of a rotated copy of `p` and the
/// constant one. `φ = 0` gives the constant one.
pub fn factor_polynomial(
    spec: &GroupSpec,
    gamma: &GroupElement,
    phi: Complex64,
    peak: &PeakPolynomial,
) -> Result<TrigPolynomial> {
    spec.check(gamma)?;
    if phi == zero() {
        return Ok(TrigPolynomial::constant(spec.clone(), one()));
    }
    let n = peak.degree as i64;
    if let ElementOrder::Finite(o) = spec.order_unchecked(gamma) {
        if o <= n as u64 + 1 {
            return Err(Error::domain(format!(
                "{gamma} has order {o}, which must exceed N+1 = {} for the factor to interpolate",
                n + 1
            )));
        }
    }
    let ceiling = peak.peak_coefficient();
    let modulus = phi.norm();
    if modulus > ceiling * (1.0 + MODULUS_SLACK) {
        return Err(Error::domain(format!(
            "|φ({gamma})| = {modulus} exceeds the peak coefficient p̂(1) = {ceiling}"
        )));
    }
    let w = (modulus / ceiling).min(1.0);
    let arg = phi.arg();
    let mut f = TrigPolynomial::constant(spec.clone(), Complex64::new(1.0 - w, 0.0));
    for m in 1..=n {
        let c = Complex64::from_polar(w * peak.coefficient(m), m as f64 * arg);
        f.add_term(spec.scale(gamma, m), c);
        f.add_term(spec.scale(gamma, -m), c.conj());
    }
    f.add_term(spec.identity(), Complex64::new(w, 0.0));
    f.set_coefficient(spec.identity(), one());
    f.set_coefficient(spec.neg(gamma), phi.conj());
    f.set_coefficient(gamma.clone(), phi);
    Ok(f)
}

/// `P = ∏_{γ∈H} P_γ` together with its certificate.
pub fn riesz_interpolate(
    set: &ElementSet,
    phi: &Phi,
    peak: &PeakPolynomial,
    opts: &InterpolationOptions,
) -> Result<Interpolation> {
    check_phi(set, phi)?;
    let degree = peak.degree as u32 + 1;
    if let Some(rel) = find_relation(set, degree, &opts.relations)? {
        return Err(Error::NotIndependent {
            degree,
            relation: rel.to_string(),
        });
    }
    let factors = nonzero_values(set, phi)
        .map(|(g, v)| factor_polynomial(&set.spec, &g, v, peak))
        .collect::<Result<Vec<_>>>()?;
    let polynomial = product(&set.spec, factors, opts)?;
    let circle = match opts.verify.positivity {
        Positivity::Factorwise => Some(circle_factors(phi, set, Some(peak))?),
        Positivity::Direct => None,
    };
    let certificate = verify_with(&polynomial, set, phi, &opts.verify, circle.as_deref())?;
    Ok(Interpolation {
        polynomial,
        certificate,
    })
}

/// Classic product plus certificate.
pub fn classic_interpolate(set: &ElementSet, phi: &Phi, opts: &InterpolationOptions) -> Result<Interpolation> {
    let polynomial = classic_riesz_product(set, phi, opts)?;
    let circle = match opts.verify.positivity {
        Positivity::Factorwise => Some(circle_factors(phi, set, None)?),
        Positivity::Direct => None,
    };
    let certificate = verify_with(&polynomial, set, phi, &opts.verify, circle.as_deref())?;
    Ok(Interpolation {
        polynomial,
        certificate,
    })
}

fn sorted(elems: &[GroupElement]) -> Vec<GroupElement> {
    let mut v = elems.to_vec();
    v.sort();
    v
}

fn product(spec: &GroupSpec, factors: Vec<TrigPolynomial>, opts: &InterpolationOptions) -> Result<TrigPolynomial> {
    let estimate = factors
        .iter()
        .fold(1u64, |acc, f| acc.saturating_mul(f.len() as u64));
    let cap = opts.multiply.support_cap as u64;
    if estimate > cap {
        return Err(Error::resource("Riesz product terms", cap, estimate));
    }
    let mut p = TrigPolynomial::constant(spec.clone(), one());
    for f in &factors {
        p = p.multiply_with(f, &opts.multiply)?;
    }
    Ok(p)
}

/// Recomputes every quantity of the certificate from `P` itself, positivity
/// included.
pub fn verify_interpolation(
    p: &TrigPolynomial,
    set: &ElementSet,
    phi: &Phi,
    opts: &VerifyOptions,
) -> Result<InterpolationCertificate> {
    verify_with(p, set, phi, opts, None)
}

fn verify_with(
    p: &TrigPolynomial,
    set: &ElementSet,
    phi: &Phi,
    opts: &VerifyOptions,
    circle_factors: Option<&[TrigPolynomial]>,
) -> Result<InterpolationCertificate> {
    if p.spec() != &set.spec {
        return Err(Error::SpecMismatch(format!(
            "polynomial lives on {} but the set on {}",
            p.spec(),
            set.spec
        )));
    }
    let residual = set
        .elems
        .iter()
        .map(|g| (p.coefficient(g) - phi_at(phi, g)).norm())
        .fold(0.0, f64::max);
    let mass_at_identity = p.mean();
    let real_valued = p.is_real_valued(1e-12);
    let (nonneg, positivity) = match (real_valued, circle_factors) {
        (false, _) => (None, Positivity::Direct),
        (true, Some(factors)) => (
            Some(factorwise_nonneg(&set.spec, factors, &opts.nonneg)?),
            Positivity::Factorwise,
        ),
        (true, None) => (Some(is_nonnegative_with(p, &opts.nonneg)?), Positivity::Direct),
    };
    let certified = nonneg.as_ref().is_some_and(|c| c.certified);
    let (l1_mass, l1_is_estimate) = if certified {
        (mass_at_identity.re, false)
    } else {
        (l1_estimate(p, opts.quadrature_multiplier)?, true)
    };
    let sup = phi_sup(phi);
    let constant_modulus = set
        .elems
        .iter()
        .all(|g| (phi_at(phi, g).norm() - sup).abs() <= MODULUS_SLACK * sup.max(1.0));
    let implied_sidon_bound = (certified && sup > 0.0 && constant_modulus && residual < sup)
        .then(|| (l1_mass / sup) / (1.0 - residual / sup));
    Ok(InterpolationCertificate {
        residual,
        mass_at_identity,
        real_valued,
        nonneg,
        positivity,
        l1_mass,
        l1_is_estimate,
        phi_sup: sup,
        implied_sidon_bound,
    })
}

fn l1_estimate(p: &TrigPolynomial, multiplier: usize) -> Result<f64> {
    let degree = p
        .terms()
        .flat_map(|(g, _)| g.free_coords().iter())
        .map(|k| k.magnitude().bits())
        .max()
        .unwrap_or(0);
    let degree = if degree >= 63 { u64::MAX } else { 1u64 << degree };
    let grid = (multiplier as u64).saturating_mul(degree).max(16);
    let grid = usize::try_from(grid).map_err(|_| Error::resource("L1 quadrature points", u32::MAX as u64, grid))?;
    lp_norm(p, 1.0, grid)
}

/// Which product the test family exercises.
#[derive(Debug, Clone, PartialEq)]
pub enum Route {
    /// Factors `1 + 2Re(φγ)`, data scaled to modulus ½.
    Classic,
    /// Factors `P_γ` from this peak polynomial, data scaled to `1/(1+ε)`.
    Peak(PeakPolynomial),
}

impl Route {
    /// The modulus test data is scaled to.
    pub fn scale(&self) -> f64 {
        match self {
            Route::Classic => 0.5,
            Route::Peak(p) => 1.0 / (1.0 + p.epsilon),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Route::Classic => "classic",
            Route::Peak(_) => "peak",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyOptions {
    /// Sign patterns are enumerated exhaustively up to this set size.
    pub max_exhaustive: usize,
    pub random_patterns: usize,
    pub seed: u64,
    pub interpolation: InterpolationOptions,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions {
            max_exhaustive: 12,
            random_patterns: 100,
            seed: 0,
            interpolation: InterpolationOptions::default(),
        }
    }
}

/// Interpolation certificates over a family of unimodular data, scaled down
/// to the route's admissible modulus `s`.
///
/// Each pattern `φ` yields a measure `P/s` of mass `‖P‖₁/s` interpolating `φ/s`
/// up to `residual/s`, hence the bound `(‖P‖₁/s)/(1 − residual/s)`. The family
/// bound is the worst of these. When every sign pattern was tested and every
/// positivity certificate went through, the bound holds for the Sidon constant
/// itself, since real sign data is the decisive class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyCertificate {
    pub route: &'static str,
    pub size: usize,
    pub scale: f64,
    pub sign_patterns: usize,
    pub random_patterns: usize,
    pub exhaustive_signs: bool,
    pub worst_residual: f64,
    /// `max |P̂(𝟏) − 1|`.
    pub worst_mass_error: f64,
    pub all_nonneg_certified: bool,
    /// Smallest certified lower bound on any `P`.
    pub min_lower_bound: f64,
    /// Worst per-pattern bound; infinite when some pattern gave none.
    pub implied_sidon_bound: f64,
    /// True when `exhaustive_signs` and every certificate is valid.
    pub unconditional: bool,
    pub seed: u64,
}

pub fn certify_family(set: &ElementSet, route: &Route, opts: &FamilyOptions) -> Result<FamilyCertificate> {
    let elems = sorted(&set.elems);
    let k = elems.len();
    let s = route.scale();
    let exhaustive = k <= opts.max_exhaustive;
    let mut patterns: Vec<Phi> = Vec::new();
    if exhaustive && k > 0 {
        for bits in 0u64..(1u64 << k) {
            patterns.push(
                elems
                    .iter()
                    .enumerate()
                    .map(|(j, g)| {
                        let sign = if bits >> j & 1 == 1 { -1.0 } else { 1.0 };
                        (g.clone(), Complex64::new(sign * s, 0.0))
                    })
                    .collect(),
            );
        }
    }
    let sign_patterns = patterns.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let random_patterns = if k == 0 { 0 } else { opts.random_patterns };
    for _ in 0..random_patterns {
        patterns.push(
            elems
                .iter()
                .map(|g| {
                    let turns: f64 = rng.gen();
                    (g.clone(), Complex64::from_polar(s, 2.0 * std::f64::consts::PI * turns))
                })
                .collect(),
        );
    }

    let sorted_set = ElementSet {
        spec: set.spec.clone(),
        elems,
    };
    // Fail early, and once, on the independence precondition.
    match route {
        Route::Classic if k > 0 => {
            classic_riesz_product(&sorted_set, &patterns[0], &opts.interpolation)?;
        }
        Route::Peak(peak) if k > 0 => {
            let degree = peak.degree as u32 + 1;
            if let Some(rel) = find_relation(&sorted_set, degree, &opts.interpolation.relations)? {
                return Err(Error::NotIndependent {
                    degree,
                    relation: rel.to_string(),
                });
            }
        }
        _ => {}
    }

    let certs: Vec<InterpolationCertificate> = patterns
        .par_iter()
        .map(|phi| match route {
            Route::Classic => classic_interpolate(&sorted_set, phi, &opts.interpolation),
            Route::Peak(peak) => riesz_interpolate(&sorted_set, phi, peak, &opts.interpolation),
        })
        .map(|r| r.map(|i| i.certificate))
        .collect::<Result<_>>()?;

    let mut out = FamilyCertificate {
        route: route.name(),
        size: k,
        scale: s,
        sign_patterns,
        random_patterns,
        exhaustive_signs: exhaustive,
        worst_residual: 0.0,
        worst_mass_error: 0.0,
        all_nonneg_certified: true,
        min_lower_bound: f64::INFINITY,
        implied_sidon_bound: if k == 0 { 1.0 } else { 0.0 },
        unconditional: exhaustive,
        seed: opts.seed,
    };
    for c in &certs {
        out.worst_residual = out.worst_residual.max(c.residual);
        out.worst_mass_error = out.worst_mass_error.max((c.mass_at_identity - one()).norm());
        let certified = c.nonneg.as_ref().is_some_and(|n| n.certified);
        out.all_nonneg_certified &= certified;
        if let Some(n) = &c.nonneg {
            out.min_lower_bound = out.min_lower_bound.min(n.lower_bound);
        }
        let bound = c.implied_sidon_bound.unwrap_or(f64::INFINITY);
        out.implied_sidon_bound = out.implied_sidon_bound.max(bound);
        out.unconditional &= certified;
    }
    if k == 0 {
        out.min_lower_bound = 1.0;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::build_fejer_peak_polynomial;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn phi_of(set: &ElementSet, vals: &[Complex64]) -> Phi {
        set.elems.iter().cloned().zip(vals.iter().copied()).collect()
    }

    #[test]
    fn classic_on_powers_of_three() {
        let e = ElementSet::integers(&[3, 9, 27, 81]);
        let phi = phi_of(&e, &[c(0.5, 0.0); 4]);
        let out = classic_interpolate(&e, &phi, &InterpolationOptions::default()).unwrap();
        assert_eq!(out.polynomial.coefficient(&GroupElement::integer(3)), c(0.5, 0.0));
        assert_eq!(out.certificate.mass_at_identity, one());
        assert!(out.certificate.is_valid(1e-10, 1e-12), "{:?}", out.certificate);
        assert!((out.certificate.implied_sidon_bound.unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn classic_single_imaginary() {
        let e = ElementSet::integers(&[3]);
        let p = classic_riesz_product(&e, &phi_of(&e, &[c(0.0, 0.5)]), &Default::default()).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.coefficient(&GroupElement::integer(-3)), c(0.0, -0.5));
        assert!(p.is_real_valued(0.0));
    }

    #[test]
    fn classic_rejections() {
        let e = ElementSet::integers(&[1, 2, 3]);
        let err = classic_riesz_product(&e, &phi_of(&e, &[c(0.1, 0.0); 3]), &Default::default()).unwrap_err();
        assert!(matches!(err, Error::NotIndependent { degree: 2, .. }));
        let e = ElementSet::integers(&[3]);
        let err = classic_riesz_product(&e, &phi_of(&e, &[c(0.6, 0.0)]), &Default::default()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn factorwise_and_direct_positivity_agree() {
        let e = ElementSet::integers(&[5, 25]);
        let peak = build_fejer_peak_polynomial(0.5).unwrap();
        let phi = phi_of(&e, &[c(2.0 / 3.0, 0.0), c(-2.0 / 3.0, 0.0)]);
        let mut opts = InterpolationOptions::default();
        let fw = riesz_interpolate(&e, &phi, &peak, &opts).unwrap().certificate;
        opts.verify.positivity = Positivity::Direct;
        let direct = riesz_interpolate(&e, &phi, &peak, &opts).unwrap().certificate;
        assert_eq!(fw.positivity, Positivity::Factorwise);
        assert_eq!(direct.positivity, Positivity::Direct);
        for cert in [&fw, &direct] {
            let n = cert.nonneg.as_ref().unwrap();
            assert!(n.certified && n.lower_bound <= 1e-12 && n.lower_bound >= -1e-9, "{n:?}");
        }
        assert_eq!(fw.implied_sidon_bound, direct.implied_sidon_bound);
    }

    #[test]
    fn factor_identities() {
        let spec = GroupSpec::integers();
        let peak = build_fejer_peak_polynomial(0.5).unwrap();
        let g = GroupElement::integer(7);
        for phi in [c(0.3, -0.2), c(0.0, 2.0 / 3.0), c(-2.0 / 3.0, 0.0)] {
            let f = factor_polynomial(&spec, &g, phi, &peak).unwrap();
            assert_eq!(f.mean(), one());
            assert_eq!(f.coefficient(&g), phi);
            assert!(f.is_real_valued(0.0));
            assert!(f.len() <= 5);
        }
        assert_eq!(factor_polynomial(&spec, &g, zero(), &peak).unwrap().len(), 1);
        assert!(factor_polynomial(&spec, &g, c(0.7, 0.0), &peak).is_err());
        let torsion = GroupSpec::new(0, vec![3]).unwrap();
        let t = torsion.torsion_element(&[1]).unwrap();
        assert!(factor_polynomial(&torsion, &t, c(0.5, 0.0), &peak).is_err());
    }

    #[test]
    fn peak_product_on_powers_of_five() {
        let h = ElementSet::integers(&[5, 25, 125, 625]);
        let peak = build_fejer_peak_polynomial(0.5).unwrap();
        let phi = phi_of(&h, &[c(0.4, 0.1), c(-0.5, 0.2), c(0.0, -0.6), c(0.66, 0.0)]);
        let out = riesz_interpolate(&h, &phi, &peak, &Default::default()).unwrap();
        assert!(out.certificate.residual < 1e-10);
        assert!((out.certificate.mass_at_identity - one()).norm() < 1e-12);
        assert!(out.certificate.nonneg.unwrap().certified);
        assert!(out.certificate.implied_sidon_bound.is_none());
    }

    #[test]
    fn planted_relation_rejected() {
        let h = ElementSet::integers(&[5, 25, 30]);
        let peak = build_fejer_peak_polynomial(0.5).unwrap();
        let phi = phi_of(&h, &[c(0.5, 0.0); 3]);
        let err = riesz_interpolate(&h, &phi, &peak, &Default::default()).unwrap_err();
        match err {
            Error::NotIndependent { degree, relation } => {
                assert_eq!(degree, 3);
                assert!(relation.contains("(30)"), "{relation}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn verification_sees_perturbation() {
        let e = ElementSet::integers(&[3, 9]);
        let phi = phi_of(&e, &[c(0.25, 0.0); 2]);
        let mut p = classic_riesz_product(&e, &phi, &Default::default()).unwrap();
        p.set_coefficient(GroupElement::integer(9), c(0.25 + 1e-3, 0.0));
        let cert = verify_interpolation(&p, &e, &phi, &Default::default()).unwrap();
        assert!((cert.residual - 1e-3).abs() < 1e-15);
        assert!(!cert.real_valued && cert.nonneg.is_none() && cert.l1_is_estimate);
    }

    #[test]
    fn family_on_empty_and_small_sets() {
        let opts = FamilyOptions {
            random_patterns: 4,
            ..Default::default()
        };
        let empty = certify_family(&ElementSet::integers(&[]), &Route::Classic, &opts).unwrap();
        assert_eq!(empty.implied_sidon_bound, 1.0);
        let fam = certify_family(&ElementSet::integers(&[3, 9, 27]), &Route::Classic, &opts).unwrap();
        assert_eq!(fam.sign_patterns, 8);
        assert!(fam.unconditional && fam.worst_residual == 0.0);
        assert!((fam.implied_sidon_bound - 2.0).abs() < 1e-9);
    }
}
