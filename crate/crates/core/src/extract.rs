//! Randomized extraction of large independent subsets.
//!
//! An attempt keeps each element of `F` independently with probability `λ/2`
//! and accepts the thinned set `F(ω)` when it is not too small
//! (`|F(ω)| ≥ λ|F|/4`) and carries few relations (`C_n(F(ω)) ≤ 2·2^{α|F(ω)|}`).
//! Relations left in an accepted set are then removed greedily. The small-constant
//! pipeline runs this at degree `N+1` for a peak polynomial of degree `N` and
//! certifies the outcome by Riesz interpolation.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rational_from_f64, serialize_biguint};
use crate::group::{ElementSet, GroupElement};
use crate::interpolate::{certify_family, FamilyCertificate, FamilyOptions, Route};
use crate::polynomial::{MultiplyOptions, PeakKind, TrigPolynomial};
use crate::relations::{
    independent_residual, is_n_degree_independent, relation_mass, relation_support_profile, RelationMass,
    RelationOptions, RemovalRule,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtractionParams {
    pub n: u32,
    pub lambda: f64,
    pub max_attempts: u32,
    pub seed: u64,
    pub alpha: f64,
    pub work_cap: u64,
    pub removal_rule: RemovalRule,
}

impl ExtractionParams {
    /// Defaults: `λ = 1/(4n)`, `α = ½`, 32 attempts, seed 0.
    pub fn new(n: u32) -> Self {
        ExtractionParams {
            n,
            lambda: 1.0 / (4.0 * n.max(1) as f64),
            max_attempts: 32,
            seed: 0,
            alpha: 0.5,
            work_cap: RelationOptions::default().work_cap,
            removal_rule: RemovalRule::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("extraction degree n must be at least 1"));
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0 / self.n as f64) {
            return Err(Error::domain(format!(
                "λ must lie in (0, 1/n) = (0, {}), got {}",
                1.0 / self.n as f64,
                self.lambda
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::domain(format!("α must lie in (0, 1), got {}", self.alpha)));
        }
        if self.max_attempts == 0 {
            return Err(Error::config("at least one extraction attempt is needed"));
        }
        Ok(())
    }

    fn relation_options(&self) -> RelationOptions {
        RelationOptions {
            work_cap: self.work_cap,
            ..RelationOptions::default()
        }
    }
}

/// Keeps each element with probability `λ/2`, in the original order.
pub fn random_thin(set: &ElementSet, lambda: f64, seed: u64) -> Result<ElementSet> {
    random_thin_stream(set, lambda, seed, 0)
}

/// As [`random_thin`], drawing from stream `stream` of the ChaCha8 generator
/// seeded with `seed`. One uniform `f64` is drawn per element, in order.
pub fn random_thin_stream(set: &ElementSet, lambda: f64, seed: u64, stream: u64) -> Result<ElementSet> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!("thinning needs λ in (0, 1), got {lambda}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let keep = lambda / 2.0;
    let elems = set
        .elems
        .iter()
        .filter(|_| rng.gen::<f64>() < keep)
        .cloned()
        .collect();
    Ok(ElementSet {
        spec: set.spec.clone(),
        elems,
    })
}

/// Mean of `C_n(F(ω))` over the thinning, exactly.
pub fn expected_relation_count(set: &ElementSet, n: u32, lambda: f64, opts: &RelationOptions) -> Result<RelationMass> {
    relation_mass(set, n, &rational_from_f64(lambda)?, opts)
}

/// The same mean read off as the constant coefficient of the expanded product
/// `∏_γ (1 + (λ/2) Σ_{k=1}^n (γ^k + γ^{−k}))`, in floating point.
pub fn expected_relation_count_by_expansion(
    set: &ElementSet,
    n: u32,
    lambda: f64,
    opts: &MultiplyOptions,
) -> Result<f64> {
    let spec = &set.spec;
    let mut acc = TrigPolynomial::constant(spec.clone(), Complex64::new(1.0, 0.0));
    let weight = Complex64::new(lambda / 2.0, 0.0);
    for g in &set.elems {
        let mut factor = TrigPolynomial::constant(spec.clone(), Complex64::new(1.0, 0.0));
        for k in 1..=n as i64 {
            factor.add_term(spec.scale(g, k), weight);
            factor.add_term(spec.scale(g, -k), weight);
        }
        acc = acc.multiply_with(&factor, opts)?;
    }
    Ok(acc.mean().re)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Attempt {
    pub attempt: u32,
    pub thinned_size: usize,
    #[serde(serialize_with = "serialize_biguint")]
    pub relation_count: BigUint,
    pub size_gate: bool,
    pub relation_gate: bool,
    pub passed_gates: bool,
    /// Size of the independent residual; computed for accepted attempts only.
    pub residual_size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractionResult {
    pub h: ElementSet,
    pub achieved_ratio: f64,
    /// Index of the attempt `h` came from.
    pub chosen_attempt: Option<u32>,
    /// No attempt passed both gates; `h` comes from the best attempt anyway.
    pub gates_failed: bool,
    /// Re-checked on the final set.
    pub independent: bool,
    pub attempts: Vec<Attempt>,
    pub params: ExtractionParams,
}

/// `C ≤ 2·2^{α m}`.
fn relation_gate(count: &BigUint, size: usize, alpha: f64) -> bool {
    let log2 = log2_biguint(count);
    log2 <= 1.0 + alpha * size as f64
}

pub(crate) fn log2_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.log2() + shift as f64
}

struct Trial {
    record: Attempt,
    thinned: ElementSet,
    residual: Option<ElementSet>,
}

pub fn extract_independent_subset(set: &ElementSet, params: &ExtractionParams) -> Result<ExtractionResult> {
    params.validate()?;
    if let Some(g) = set.elems.iter().find(|g| g.is_identity()) {
        return Err(Error::domain(format!("the identity {g} cannot be part of an extraction input")));
    }
    let rel_opts = params.relation_options();
    let size_threshold = params.lambda * set.len() as f64 / 4.0;

    let trials: Vec<Trial> = (0..params.max_attempts)
        .into_par_iter()
        .map(|attempt| -> Result<Trial> {
            let thinned = random_thin_stream(set, params.lambda, params.seed, attempt as u64)?;
            let count: BigUint = relation_support_profile(&thinned, params.n, &rel_opts)?
                .iter()
                .sum();
            let size_gate = thinned.len() as f64 >= size_threshold;
            let rel_gate = relation_gate(&count, thinned.len(), params.alpha);
            let passed = size_gate && rel_gate;
            let residual = if passed {
                Some(independent_residual(&thinned, params.n, params.removal_rule, &rel_opts)?.kept)
            } else {
                None
            };
            Ok(Trial {
                record: Attempt {
                    attempt,
                    thinned_size: thinned.len(),
                    relation_count: count,
                    size_gate,
                    relation_gate: rel_gate,
                    passed_gates: passed,
                    residual_size: residual.as_ref().map(ElementSet::len),
                },
                thinned,
                residual,
            })
        })
        .collect::<Result<_>>()?;

    let mut chosen: Option<(usize, &ElementSet)> = None;
    for (i, t) in trials.iter().enumerate() {
        if let Some(r) = &t.residual {
            if chosen.is_none_or(|(_, best)| r.len() > best.len()) {
                chosen = Some((i, r));
            }
        }
    }
    let gates_failed = chosen.is_none();
    let (index, h) = match chosen {
        Some((i, r)) => (i, r.clone()),
        None => {
            // Largest thinned set, then fewest relations, then lowest index.
            let i = (0..trials.len())
                .min_by(|&a, &b| {
                    let (ra, rb) = (&trials[a].record, &trials[b].record);
                    rb.thinned_size
                        .cmp(&ra.thinned_size)
                        .then_with(|| ra.relation_count.cmp(&rb.relation_count))
                        .then(a.cmp(&b))
                })
                .expect("at least one attempt");
            let kept = independent_residual(&trials[i].thinned, params.n, params.removal_rule, &rel_opts)?.kept;
            (i, kept)
        }
    };
    let mut attempts: Vec<Attempt> = trials.into_iter().map(|t| t.record).collect();
    if gates_failed {
        attempts[index].residual_size = Some(h.len());
    }
    let independent = is_n_degree_independent(&h, params.n, &rel_opts)?;
    Ok(ExtractionResult {
        achieved_ratio: if set.is_empty() { 0.0 } else { h.len() as f64 / set.len() as f64 },
        chosen_attempt: Some(index as u32),
        gates_failed,
        independent,
        h,
        attempts,
        params: *params,
    })
}

/// `s(θ) = ((1−θ)/2)·log₂(2e/(1−θ))`, with `s(1) = 0`.
pub fn gate_exponent(theta: f64) -> f64 {
    let a = (1.0 - theta) / 2.0;
    if a <= 0.0 {
        0.0
    } else {
        a * (std::f64::consts::E / a).log2()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateRow {
    pub m: u64,
    pub theta: f64,
    /// `⌊m(1−θ)/2⌋`.
    pub k: u64,
    #[serde(serialize_with = "serialize_biguint")]
    pub binomial: BigUint,
    pub log2_binomial: f64,
    /// `s(θ)·m`.
    pub bound_log2: f64,
    pub slack_bits: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateReport {
    pub rows: Vec<GateRow>,
    pub all_hold: bool,
    /// Smallest slack over all rows.
    pub min_slack_bits: f64,
}

/// Checks `C(m, ⌊m(1−θ)/2⌋) ≤ 2^{s(θ)m}` with exact binomials for every pair.
pub fn binomial_gate_check(sizes: &[u64], thetas: &[f64]) -> Result<GateReport> {
    let mut rows = Vec::new();
    for &theta in thetas {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::domain(format!("θ must lie in [0, 1], got {theta}")));
        }
        for &m in sizes {
            let k = ((m as f64) * (1.0 - theta) / 2.0).floor() as u64;
            let binomial = binomial(m, k);
            let log2_binomial = log2_biguint(&binomial);
            let bound_log2 = gate_exponent(theta) * m as f64;
            let slack_bits = bound_log2 - log2_binomial;
            rows.push(GateRow {
                m,
                theta,
                k,
                binomial,
                log2_binomial,
                bound_log2,
                slack_bits,
                holds: slack_bits >= 0.0,
            });
        }
    }
    Ok(GateReport {
        all_hold: rows.iter().all(|r| r.holds),
        min_slack_bits: rows.iter().map(|r| r.slack_bits).fold(f64::INFINITY, f64::min),
        rows,
    })
}

fn binomial(m: u64, k: u64) -> BigUint {
    let k = k.min(m - k.min(m));
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(m - i) / BigUint::from(i + 1);
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CosetSplit {
    /// Number of leading coordinates with modulus at most `N+1`.
    pub n0: usize,
    /// Product of those moduli.
    pub m: u128,
    /// The chosen coset representative, supported on the leading coordinates.
    pub gamma: GroupElement,
    /// `F₁ = γY`, the largest fiber.
    pub fiber: Vec<GroupElement>,
    /// `Y = γ⁻¹F₁`, supported on the trailing coordinates.
    pub y: Vec<GroupElement>,
    /// Fiber sizes in order of their leading coordinates.
    pub fiber_sizes: Vec<usize>,
}

/// Splits `F` along the leading coordinates whose moduli are at most `N+1`
/// and keeps the largest fiber. By pigeonhole `|F₁| ≥ |F|/M`.
pub fn split_coset(set: &ElementSet, degree: usize) -> Result<CosetSplit> {
    let spec = &set.spec;
    if !spec.is_torsion_product() {
        return Err(Error::domain(format!(
            "coset splitting needs a pure torsion product, got {spec}"
        )));
    }
    let moduli = spec.moduli();
    let limit = degree as u64 + 1;
    let n0 = moduli.iter().rposition(|&p| p <= limit).map_or(0, |i| i + 1);
    if n0 == moduli.len() {
        return Err(Error::domain(format!(
            "moduli do not tend past N+1 = {limit}: no coordinate after the last one with modulus <= {limit}"
        )));
    }
    let m = moduli[..n0]
        .iter()
        .try_fold(1u128, |acc, &p| acc.checked_mul(p as u128))
        .ok_or_else(|| Error::domain("the product of the leading moduli overflows 128 bits"))?;
    let mut fibers: BTreeMap<Vec<u64>, Vec<GroupElement>> = BTreeMap::new();
    for g in &set.elems {
        fibers
            .entry(g.torsion_coords()[..n0].to_vec())
            .or_default()
            .push(g.clone());
    }
    let fiber_sizes: Vec<usize> = fibers.values().map(Vec::len).collect();
    let mut best: Option<(&Vec<u64>, &Vec<GroupElement>)> = None;
    for (key, members) in &fibers {
        if best.is_none_or(|(_, b)| members.len() > b.len()) {
            best = Some((key, members));
        }
    }
    let (head, fiber) = match best {
        Some((k, f)) => (k.clone(), f.clone()),
        None => (vec![0; n0], Vec::new()),
    };
    let mut residues: Vec<i64> = head.iter().map(|&r| r as i64).collect();
    residues.resize(moduli.len(), 0);
    let gamma = spec.torsion_element(&residues)?;
    let inv = spec.neg(&gamma);
    let y = fiber.iter().map(|g| spec.add(g, &inv)).collect();
    Ok(CosetSplit {
        n0,
        m,
        gamma,
        fiber,
        y,
        fiber_sizes,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmallConstantParams {
    pub peak: PeakKind,
    /// Extraction settings; `n` is overwritten with `N+1`. `None` fields use the
    /// defaults for that degree.
    pub lambda: Option<f64>,
    pub max_attempts: u32,
    pub seed: u64,
    pub alpha: f64,
    pub work_cap: u64,
    pub family: FamilyOptions,
}

impl Default for SmallConstantParams {
    fn default() -> Self {
        SmallConstantParams {
            peak: PeakKind::Fejer,
            lambda: None,
            max_attempts: 32,
            seed: 0,
            alpha: 0.5,
            work_cap: RelationOptions::default().work_cap,
            family: FamilyOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakSummary {
    pub kind: PeakKind,
    pub epsilon: f64,
    pub degree: usize,
    pub peak_coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallConstantResult {
    pub h: ElementSet,
    pub peak: PeakSummary,
    pub coset: Option<CosetSplit>,
    /// Set when the identity was dropped from `Y` before extraction.
    pub dropped_identity: bool,
    pub extraction: ExtractionResult,
    pub certificate: FamilyCertificate,
    /// `1 + ε` when the certificate supports it.
    pub sidon_bound: f64,
}

/// Peak polynomial, optional coset split, extraction at degree `N+1`, then a
/// family certificate for the extracted set.
pub fn extract_small_constant_subset(
    set: &ElementSet,
    epsilon: f64,
    params: &SmallConstantParams,
) -> Result<SmallConstantResult> {
    let peak = params.peak.build(epsilon)?;
    let degree = peak.degree;
    let n = u32::try_from(degree + 1).map_err(|_| Error::domain("peak degree too large"))?;

    let (coset, mut work) = if !set.spec.moduli().is_empty() && set.spec.is_torsion_product() {
        let split = split_coset(set, degree)?;
        let y = ElementSet {
            spec: set.spec.clone(),
            elems: split.y.clone(),
        };
        (Some(split), y)
    } else {
        (None, set.clone())
    };
    let before = work.len();
    work.elems.retain(|g| !g.is_identity());
    let dropped_identity = work.len() != before;

    let mut ext = ExtractionParams::new(n);
    if let Some(l) = params.lambda {
        ext.lambda = l;
    }
    ext.max_attempts = params.max_attempts;
    ext.seed = params.seed;
    ext.alpha = params.alpha;
    ext.work_cap = params.work_cap;
    let extraction = extract_independent_subset(&work, &ext)?;

    let mut family = params.family;
    family.interpolation.relations.work_cap = params.work_cap;
    let certificate = certify_family(&extraction.h, &Route::Peak(peak.clone()), &family)?;

    let h = match &coset {
        Some(split) => ElementSet {
            spec: set.spec.clone(),
            elems: extraction
                .h
                .elems
                .iter()
                .map(|g| set.spec.add(g, &split.gamma))
                .collect(),
        },
        None => extraction.h.clone(),
    };
    Ok(SmallConstantResult {
        h,
        peak: PeakSummary {
            kind: peak.kind,
            epsilon,
            degree,
            peak_coefficient: peak.peak_coefficient(),
        },
        coset,
        dropped_identity,
        sidon_bound: certificate.implied_sidon_bound,
        extraction,
        certificate,
    })
}
