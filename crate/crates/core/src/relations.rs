//! Relations `∏ γ^{ξ_γ} = 𝟏` with exponents bounded by `n`, counted exactly.
//!
//! Every query works on the set sorted by the canonical element order, and
//! exponents are tried in the order `0, 1, −1, 2, −2, …`. "Lexicographically
//! smallest" below always refers to that pair of orders.
//!
//! Two engines are available. The dynamic program walks the elements one by one
//! and keys partial sums in a hash map; its cost is governed by how many distinct
//! partial sums there are. Meet-in-the-middle enumerates both halves of the set
//! in full and joins on the sum; its cost is `(2n+1)^{|F|/2}` regardless of the
//! element sizes. The cheaper of the two (by an a-priori estimate) is used.

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{rational_to_f64, serialize_biguint, serialize_biguints, serialize_rational};
use crate::group::{ElementOrder, ElementSet, GroupElement, GroupSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationOptions {
    /// Upper limit on estimated hash-map updates (or enumerated words).
    pub work_cap: u64,
    /// How many nontrivial relations a report or the removal rule looks at.
    pub sample_cap: usize,
    pub engine: Engine,
}

/// Engine selection; `Auto` takes the one with the smaller cost estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Auto,
    DynamicProgram,
    MeetInTheMiddle,
}

impl Default for RelationOptions {
    fn default() -> Self {
        RelationOptions {
            work_cap: 100_000_000,
            sample_cap: 8,
            engine: Engine::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Empty,
    DynamicProgram,
    MeetInTheMiddle,
}

/// A relation `ξ`, stored by its nonzero entries in canonical element order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentVector {
    pub n: u32,
    pub terms: Vec<(GroupElement, i64)>,
}

impl ExponentVector {
    pub fn exponent(&self, g: &GroupElement) -> i64 {
        self.terms
            .iter()
            .find(|(h, _)| h == g)
            .map_or(0, |&(_, e)| e)
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.terms.iter().map(|(g, _)| g)
    }

    /// Number of elements with a nonzero exponent.
    pub fn support_size(&self) -> usize {
        self.terms.len()
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (g, e)) in self.terms.iter().enumerate() {
            let sign = if *e < 0 { "-" } else { "+" };
            match (i, *e < 0) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                _ => write!(f, " {sign} ")?,
            }
            write!(f, "{}*({g})", e.unsigned_abs())?;
        }
        f.write_str(" = 0")
    }
}

impl Serialize for ExponentVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            elem: &'a GroupElement,
            exponent: i64,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(elem, exponent)| Term {
                elem,
                exponent: *exponent,
            })
            .collect();
        let mut st = s.serialize_struct("ExponentVector", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationReport {
    pub n: u32,
    pub size: usize,
    pub independent: bool,
    /// `C_n(F)`, trivial vectors included.
    #[serde(serialize_with = "serialize_biguint")]
    pub count: BigUint,
    /// Vectors with `γ^{ξ_γ} = 𝟏` for every `γ`.
    #[serde(serialize_with = "serialize_biguint")]
    pub trivial_count: BigUint,
    /// Entry `j` counts relations with exactly `j` nonzero exponents.
    #[serde(serialize_with = "serialize_biguints")]
    pub support_profile: Vec<BigUint>,
    /// The lexicographically first nontrivial relations, at most `sample_cap`.
    pub sample_relations: Vec<ExponentVector>,
    pub method: Method,
    pub estimated_work: u64,
    /// The identity should not be in the set; it makes every exponent trivial.
    pub contains_identity: bool,
}

/// The set sorted canonically, with the per-exponent multiples precomputed.
struct Prepared<'a> {
    spec: &'a GroupSpec,
    n: u32,
    elems: Vec<GroupElement>,
    /// `multiples[i][d] = value(d)·elems[i]`.
    multiples: Vec<Vec<GroupElement>>,
    /// Whether `value(d)·elems[i] ≠ 𝟏`.
    nontrivial: Vec<Vec<bool>>,
}

/// Exponent for digit `d` in the order `0, 1, −1, 2, −2, …`.
fn digit_value(d: usize) -> i64 {
    if d % 2 == 1 {
        d.div_ceil(2) as i64
    } else {
        -((d / 2) as i64)
    }
}

fn prepare<'a>(set: &'a ElementSet, n: u32) -> Result<Prepared<'a>> {
    prepare_elems(&set.spec, set.elems.clone(), n)
}

fn prepare_elems(spec: &GroupSpec, mut elems: Vec<GroupElement>, n: u32) -> Result<Prepared<'_>> {
    if n == 0 {
        return Err(Error::domain("relation degree n must be at least 1"));
    }
    for g in &elems {
        spec.check(g)?;
    }
    elems.sort();
    elems.dedup();
    let width = 2 * n as usize + 1;
    let multiples = elems
        .iter()
        .map(|g| (0..width).map(|d| spec.scale(g, digit_value(d))).collect())
        .collect::<Vec<Vec<_>>>();
    let nontrivial = multiples
        .iter()
        .map(|row| row.iter().map(|m| !m.is_identity()).collect())
        .collect();
    Ok(Prepared {
        spec,
        n,
        elems,
        multiples,
        nontrivial,
    })
}

impl Prepared<'_> {
    fn width(&self) -> usize {
        2 * self.n as usize + 1
    }

    fn len(&self) -> usize {
        self.elems.len()
    }

    fn vector(&self, digits: &[usize]) -> ExponentVector {
        ExponentVector {
            n: self.n,
            terms: self
                .elems
                .iter()
                .zip(digits)
                .filter(|(_, &d)| d != 0)
                .map(|(g, &d)| (g.clone(), digit_value(d)))
                .collect(),
        }
    }

    /// Upper bound on the hash-map updates of a dynamic program that adds the
    /// elements in the given order: the number of live partial sums is at most
    /// the size of the box they can occupy, and at most `(2n+1)^i`.
    fn dp_estimate(&self, order: impl Iterator<Item = usize>) -> f64 {
        let width = self.width() as f64;
        let n = self.n as f64;
        let mut spans = vec![0.0f64; self.spec.free_rank()];
        let mut touched = vec![false; self.spec.moduli().len()];
        let mut states = 1.0f64;
        let mut total = 0.0;
        for i in order {
            total += states * width;
            let g = &self.elems[i];
            for (s, c) in spans.iter_mut().zip(g.free_coords()) {
                *s += n * c.magnitude().to_f64().unwrap_or(f64::INFINITY);
            }
            for (t, &r) in touched.iter_mut().zip(g.torsion_coords()) {
                *t |= r != 0;
            }
            let boxed: f64 = spans.iter().map(|s| 2.0 * s + 1.0).product::<f64>()
                * self
                    .spec
                    .moduli()
                    .iter()
                    .zip(&touched)
                    .filter(|(_, &t)| t)
                    .map(|(&p, _)| p as f64)
                    .product::<f64>();
            states = (states * width).min(boxed);
        }
        total
    }

    fn mitm_estimate(&self) -> f64 {
        let k = self.len() as i32;
        let w = self.width() as f64;
        w.powi(k / 2) + w.powi(k - k / 2)
    }

    /// Picks the cheaper engine, or fails when both exceed the cap.
    fn choose(&self, dp: f64, opts: &RelationOptions) -> Result<(Method, u64)> {
        if self.elems.is_empty() {
            return Ok((Method::Empty, 0));
        }
        let cap = opts.work_cap;
        let mitm = self.mitm_estimate();
        let (method, est) = match opts.engine {
            Engine::DynamicProgram => (Method::DynamicProgram, dp),
            Engine::MeetInTheMiddle => (Method::MeetInTheMiddle, mitm),
            Engine::Auto if dp <= mitm => (Method::DynamicProgram, dp),
            Engine::Auto => (Method::MeetInTheMiddle, mitm),
        };
        let est_int = if est >= u64::MAX as f64 { u64::MAX } else { est.ceil() as u64 };
        if est_int > cap {
            return Err(Error::resource("relation enumeration steps", cap, est_int));
        }
        Ok((method, est_int))
    }

    /// Visits every word of `rows` (one multiple chosen per element) in
    /// lexicographic order, with its sum and digits.
    fn for_each_word(
        &self,
        rows: &[Vec<GroupElement>],
        mut visit: impl FnMut(&GroupElement, &[usize]) -> ControlFlow<()>,
    ) {
        let k = rows.len();
        let width = self.width();
        let mut digits = vec![0usize; k];
        let mut partial = Vec::with_capacity(k + 1);
        partial.push(self.spec.identity());
        for row in rows {
            let next = self.spec.add(partial.last().unwrap(), &row[0]);
            partial.push(next);
        }
        loop {
            if visit(&partial[k], &digits).is_break() {
                return;
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < width {
                    break;
                }
                digits[i] = 0;
            }
            for j in i..k {
                partial[j + 1] = self.spec.add(&partial[j], &rows[j][digits[j]]);
            }
        }
    }

    fn support_profile(&self, method: Method) -> Vec<BigUint> {
        let k = self.len();
        let mut profile = match method {
            Method::Empty => vec![BigUint::one()],
            Method::DynamicProgram => self.profile_dp(),
            Method::MeetInTheMiddle => self.profile_mitm(),
        };
        profile.resize(k + 1, BigUint::zero());
        profile
    }

    fn profile_dp(&self) -> Vec<BigUint> {
        let mut states: HashMap<GroupElement, Vec<BigUint>> = HashMap::new();
        states.insert(self.spec.identity(), vec![BigUint::one()]);
        for row in &self.multiples {
            let mut next: HashMap<GroupElement, Vec<BigUint>> = HashMap::with_capacity(states.len() * 2);
            for (s, counts) in &states {
                for (d, m) in row.iter().enumerate() {
                    let shift = usize::from(d != 0);
                    let slot = next.entry(self.spec.add(s, m)).or_default();
                    if slot.len() < counts.len() + shift {
                        slot.resize(counts.len() + shift, BigUint::zero());
                    }
                    for (j, c) in counts.iter().enumerate() {
                        if !c.is_zero() {
                            slot[j + shift] += c;
                        }
                    }
                }
            }
            states = next;
        }
        states.remove(&self.spec.identity()).unwrap_or_default()
    }

    fn profile_mitm(&self) -> Vec<BigUint> {
        let a = self.len() / 2;
        let (left, right) = self.multiples.split_at(a);
        let mut table: HashMap<GroupElement, Vec<u64>> = HashMap::new();
        self.for_each_word(left, |s, digits| {
            let size = digits.iter().filter(|&&d| d != 0).count();
            let slot = table.entry(s.clone()).or_insert_with(|| vec![0; a + 1]);
            slot[size] += 1;
            ControlFlow::Continue(())
        });
        let mut acc = vec![0u128; self.len() + 1];
        self.for_each_word(right, |t, digits| {
            let size = digits.iter().filter(|&&d| d != 0).count();
            if let Some(counts) = table.get(&self.spec.neg(t)) {
                for (j, &c) in counts.iter().enumerate() {
                    acc[j + size] += c as u128;
                }
            }
            ControlFlow::Continue(())
        });
        acc.into_iter().map(BigUint::from).collect()
    }

    /// The first `limit` nontrivial relations in lexicographic order.
    fn find(&self, limit: usize, method: Method) -> Vec<ExponentVector> {
        if limit == 0 {
            return Vec::new();
        }
        match method {
            Method::Empty => Vec::new(),
            Method::DynamicProgram => self.find_dp(limit),
            Method::MeetInTheMiddle => self.find_mitm(limit),
        }
    }

    fn find_dp(&self, limit: usize) -> Vec<ExponentVector> {
        const PLAIN: u8 = 1;
        const NONTRIVIAL: u8 = 2;
        let k = self.len();
        // reach[i]: suffix sums over elements i.., tagged by whether some term
        // of the suffix is nontrivial.
        let mut reach: Vec<HashMap<GroupElement, u8>> = vec![HashMap::new(); k + 1];
        reach[k].insert(self.spec.identity(), PLAIN);
        for i in (0..k).rev() {
            let mut here: HashMap<GroupElement, u8> = HashMap::with_capacity(reach[i + 1].len() * 2);
            for (t, &bits) in &reach[i + 1] {
                for (d, m) in self.multiples[i].iter().enumerate() {
                    let tag = if self.nontrivial[i][d] { NONTRIVIAL } else { bits };
                    *here.entry(self.spec.add(m, t)).or_insert(0) |= tag;
                }
            }
            reach[i] = here;
        }

        let mut out = Vec::new();
        let mut digits = Vec::with_capacity(k);
        self.descend(&reach, 0, self.spec.identity(), false, &mut digits, &mut out, limit);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        reach: &[HashMap<GroupElement, u8>],
        i: usize,
        sum: GroupElement,
        flagged: bool,
        digits: &mut Vec<usize>,
        out: &mut Vec<ExponentVector>,
        limit: usize,
    ) {
        if i == self.len() {
            out.push(self.vector(digits));
            return;
        }
        for d in 0..self.width() {
            let s = self.spec.add(&sum, &self.multiples[i][d]);
            let f = flagged || self.nontrivial[i][d];
            let viable = match reach[i + 1].get(&self.spec.neg(&s)) {
                Some(&bits) if f => bits != 0,
                Some(&bits) => bits & 2 != 0,
                None => false,
            };
            if viable {
                digits.push(d);
                self.descend(reach, i + 1, s, f, digits, out, limit);
                digits.pop();
                if out.len() >= limit {
                    return;
                }
            }
        }
    }

    fn find_mitm(&self, limit: usize) -> Vec<ExponentVector> {
        let a = self.len() / 2;
        let b = self.len() - a;
        let width = self.width();
        let (left, right) = self.multiples.split_at(a);
        let mut table: HashMap<GroupElement, Vec<(u64, bool)>> = HashMap::new();
        let mut index = 0u64;
        self.for_each_word(right, |t, digits| {
            let flag = digits
                .iter()
                .enumerate()
                .any(|(j, &d)| self.nontrivial[a + j][d]);
            table.entry(t.clone()).or_default().push((index, flag));
            index += 1;
            ControlFlow::Continue(())
        });

        let mut out = Vec::new();
        self.for_each_word(left, |s, digits| {
            let flag = digits.iter().enumerate().any(|(j, &d)| self.nontrivial[j][d]);
            if let Some(matches) = table.get(&self.spec.neg(s)) {
                for &(r, g) in matches {
                    if flag || g {
                        let mut full = digits.to_vec();
                        let mut rest = vec![0usize; b];
                        let mut x = r;
                        for slot in rest.iter_mut().rev() {
                            *slot = (x % width as u64) as usize;
                            x /= width as u64;
                        }
                        full.extend(rest);
                        out.push(self.vector(&full));
                        if out.len() >= limit {
                            return ControlFlow::Break(());
                        }
                    }
                }
            }
            ControlFlow::Continue(())
        });
        out
    }

    fn trivial_count(&self) -> BigUint {
        let n = self.n as u64;
        self.elems
            .iter()
            .map(|g| match self.spec.order_unchecked(g) {
                ElementOrder::Finite(o) => BigUint::from(2 * (n / o) + 1),
                ElementOrder::Infinite => BigUint::one(),
            })
            .product()
    }
}

/// `C_n(F)` with its support profile and the first few nontrivial relations.
pub fn count_relations(set: &ElementSet, n: u32, opts: &RelationOptions) -> Result<RelationReport> {
    let prep = prepare(set, n)?;
    let k = prep.len();
    let forward = prep.dp_estimate(0..k);
    let backward = prep.dp_estimate((0..k).rev());
    let (method, estimate) = prep.choose(forward + backward, opts)?;
    let support_profile = prep.support_profile(method);
    let count: BigUint = support_profile.iter().sum();
    let sample_relations = prep.find(opts.sample_cap, method);
    let trivial_count = prep.trivial_count();
    Ok(RelationReport {
        n,
        size: k,
        independent: count == trivial_count,
        count,
        trivial_count,
        support_profile,
        sample_relations,
        method,
        estimated_work: estimate,
        contains_identity: prep.elems.iter().any(GroupElement::is_identity),
    })
}

/// Counts of relations by number of nonzero exponents: entry `j` is the number
/// of `ξ` with `∏γ^{ξ_γ} = 𝟏` and exactly `j` nonzero entries.
pub fn relation_support_profile(set: &ElementSet, n: u32, opts: &RelationOptions) -> Result<Vec<BigUint>> {
    let prep = prepare(set, n)?;
    let (method, _) = prep.choose(prep.dp_estimate(0..prep.len()), opts)?;
    Ok(prep.support_profile(method))
}

/// The first `limit` nontrivial relations (some `γ^{ξ_γ} ≠ 𝟏`) in
/// lexicographic order.
pub fn find_relations(
    set: &ElementSet,
    n: u32,
    limit: usize,
    opts: &RelationOptions,
) -> Result<Vec<ExponentVector>> {
    find_in(&set.spec, set.elems.clone(), n, limit, opts)
}

fn find_in(
    spec: &GroupSpec,
    elems: Vec<GroupElement>,
    n: u32,
    limit: usize,
    opts: &RelationOptions,
) -> Result<Vec<ExponentVector>> {
    let prep = prepare_elems(spec, elems, n)?;
    let (method, _) = prep.choose(prep.dp_estimate((0..prep.len()).rev()), opts)?;
    Ok(prep.find(limit, method))
}

/// The lexicographically smallest nontrivial relation, if any.
pub fn find_relation(set: &ElementSet, n: u32, opts: &RelationOptions) -> Result<Option<ExponentVector>> {
    Ok(find_relations(set, n, 1, opts)?.into_iter().next())
}

pub fn is_n_degree_independent(set: &ElementSet, n: u32, opts: &RelationOptions) -> Result<bool> {
    Ok(find_relation(set, n, opts)?.is_none())
}

pub fn is_quasi_independent(set: &ElementSet) -> Result<bool> {
    is_n_degree_independent(set, 1, &RelationOptions::default())
}

pub fn is_dissociate(set: &ElementSet) -> Result<bool> {
    is_n_degree_independent(set, 2, &RelationOptions::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LengthIndependence {
    pub independent: bool,
    /// The set has fewer than `n` elements, so there is nothing to check.
    pub vacuous: bool,
}

/// Whether no `±1` combination of at most `n` distinct elements multiplies to
/// `𝟏` unless every factor is `𝟏`.
pub fn is_n_length_independent(set: &ElementSet, n: u32, opts: &RelationOptions) -> Result<LengthIndependence> {
    if n == 0 {
        return Err(Error::domain("relation length n must be at least 1"));
    }
    if set.len() < n as usize {
        return Ok(LengthIndependence {
            independent: true,
            vacuous: true,
        });
    }
    let prep = prepare(set, 1)?;
    let est = prep.dp_estimate(0..prep.len()) * (n as f64 + 1.0);
    if est > opts.work_cap as f64 {
        return Err(Error::resource(
            "relation enumeration steps",
            opts.work_cap,
            est.min(u64::MAX as f64) as u64,
        ));
    }
    // States: (partial sum, number of nonzero exponents) → {plain, nontrivial}.
    let mut states: HashMap<(GroupElement, u32), u8> = HashMap::new();
    states.insert((prep.spec.identity(), 0), 1);
    for (i, row) in prep.multiples.iter().enumerate() {
        let mut next = HashMap::with_capacity(states.len() * 3);
        for ((s, used), &bits) in &states {
            for (d, m) in row.iter().enumerate() {
                let used = used + u32::from(d != 0);
                if used > n {
                    continue;
                }
                let tag = if prep.nontrivial[i][d] { 2 } else { bits };
                *next.entry((prep.spec.add(s, m), used)).or_insert(0) |= tag;
            }
        }
        states = next;
    }
    let id = prep.spec.identity();
    let violated = (0..=n).any(|used| states.get(&(id.clone(), used)).is_some_and(|b| b & 2 != 0));
    Ok(LengthIndependence {
        independent: !violated,
        vacuous: false,
    })
}

/// Which element of a relation's support [`independent_residual`] discards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemovalRule {
    /// The element appearing in the most sampled relations; ties go to the
    /// smaller element.
    #[default]
    MostFrequent,
    Smallest,
    Largest,
}

impl FromStr for RemovalRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "most-frequent" => Ok(RemovalRule::MostFrequent),
            "smallest" => Ok(RemovalRule::Smallest),
            "largest" => Ok(RemovalRule::Largest),
            other => Err(Error::config(format!(
                "unknown removal rule {other:?} (expected most-frequent, smallest or largest)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    /// The surviving elements, in their original order.
    pub kept: ElementSet,
    /// Discarded elements, in removal order.
    pub removed: Vec<GroupElement>,
}

/// Greedily discards elements until no nontrivial relation of degree `n`
/// remains. Each round looks at the first `sample_cap` relations and removes
/// one element carrying a nontrivial term of the smallest one.
pub fn independent_residual(
    set: &ElementSet,
    n: u32,
    rule: RemovalRule,
    opts: &RelationOptions,
) -> Result<Residual> {
    let mut current = set.elems.clone();
    let mut removed = Vec::new();
    loop {
        let rels = find_in(&set.spec, current.clone(), n, opts.sample_cap.max(1), opts)?;
        let Some(first) = rels.first() else { break };
        let candidates: Vec<&GroupElement> = first
            .terms
            .iter()
            .filter(|(g, e)| !set.spec.scale(g, *e).is_identity())
            .map(|(g, _)| g)
            .collect();
        let victim = match rule {
            RemovalRule::Smallest => candidates[0].clone(),
            RemovalRule::Largest => candidates[candidates.len() - 1].clone(),
            RemovalRule::MostFrequent => {
                let mut best = (0usize, candidates[0]);
                for &g in &candidates {
                    let hits = rels.iter().filter(|r| r.exponent(g) != 0).count();
                    if hits > best.0 {
                        best = (hits, g);
                    }
                }
                best.1.clone()
            }
        };
        current.retain(|g| *g != victim);
        removed.push(victim);
    }
    Ok(Residual {
        kept: ElementSet {
            spec: set.spec.clone(),
            elems: current,
        },
        removed,
    })
}

/// `Σ_ξ (λ/2)^{#supp ξ}` over all relations of degree `n`, exactly.
///
/// This is the mean of `C_n` over the random subset that keeps each element
/// with probability `λ/2`, and also the constant coefficient of
/// `∏_γ (1 + (λ/2) Σ_{k=1}^n (γ^k + γ^{−k}))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationMass {
    #[serde(serialize_with = "serialize_rational")]
    pub exact: BigRational,
    pub value: f64,
    #[serde(serialize_with = "serialize_rational")]
    pub lambda: BigRational,
    #[serde(serialize_with = "serialize_biguints")]
    pub support_profile: Vec<BigUint>,
}

pub fn relation_mass(set: &ElementSet, n: u32, lambda: &BigRational, opts: &RelationOptions) -> Result<RelationMass> {
    let profile = relation_support_profile(set, n, opts)?;
    let half = lambda / BigRational::from_integer(2.into());
    let mut weight = BigRational::one();
    let mut exact = BigRational::zero();
    for c in &profile {
        exact += &weight * BigRational::from_integer(c.clone().into());
        weight *= &half;
    }
    Ok(RelationMass {
        value: rational_to_f64(&exact),
        exact,
        lambda: lambda.clone(),
        support_profile: profile,
    })
}
