//! Finitely generated discrete abelian groups `ℤ^d ⊕ ℤ_{p_1} ⊕ … ⊕ ℤ_{p_t}`.
//!
//! Elements of the group are the characters of the compact dual `G = 𝕋^d × ∏ ℤ_{p_i}`.
//! The group law is written additively: the multiplicative `γ^m` of harmonic
//! analysis is [`GroupSpec::power`], `γχ` is [`GroupSpec::combine`].
//!
//! Free coordinates are arbitrary-precision integers so that relation sums never
//! overflow; torsion coordinates are residues kept reduced modulo their modulus.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ambient group: free rank `d` plus an ordered list of cyclic torsion factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct GroupSpec {
    free_rank: usize,
    moduli: Vec<u64>,
}

#[derive(Deserialize)]
struct RawSpec {
    #[serde(default)]
    free_rank: usize,
    #[serde(default)]
    moduli: Vec<u64>,
}

impl TryFrom<RawSpec> for GroupSpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        GroupSpec::new(raw.free_rank, raw.moduli)
    }
}

/// A character of `G`, i.e. an element of the discrete group.
///
/// The derived ordering (free coordinates lexicographically, then torsion
/// residues) is the canonical element order used everywhere determinism matters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    free: Vec<BigInt>,
    torsion: Vec<u64>,
}

/// A point of the dual group `G`: free coordinates in `[0,1)`, torsion coordinates
/// as residues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualPoint {
    pub free: Vec<f64>,
    pub torsion: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementOrder {
    Finite(u64),
    Infinite,
}

impl ElementOrder {
    /// True when the order is strictly greater than `n`.
    pub fn exceeds(self, n: u64) -> bool {
        match self {
            ElementOrder::Finite(k) => k > n,
            ElementOrder::Infinite => true,
        }
    }
}

impl fmt::Display for ElementOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementOrder::Finite(k) => write!(f, "{k}"),
            ElementOrder::Infinite => f.write_str("infinite"),
        }
    }
}

/// Result of [`GroupSpec::power_set`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSet {
    pub elems: Vec<GroupElement>,
    /// Whether two distinct inputs had the same power.
    pub collisions: bool,
}

impl GroupSpec {
    pub fn new(free_rank: usize, moduli: Vec<u64>) -> Result<Self> {
        if let Some(bad) = moduli.iter().find(|&&p| p < 2) {
            return Err(Error::domain(format!("torsion modulus {bad} is below 2")));
        }
        Ok(GroupSpec { free_rank, moduli })
    }

    /// The integers `ℤ`.
    pub fn integers() -> Self {
        GroupSpec {
            free_rank: 1,
            moduli: Vec::new(),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn is_torsion_free(&self) -> bool {
        self.moduli.is_empty()
    }

    /// A finite product of cyclic groups with no free part.
    pub fn is_torsion_product(&self) -> bool {
        self.free_rank == 0 && !self.moduli.is_empty()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            free: vec![BigInt::zero(); self.free_rank],
            torsion: vec![0; self.moduli.len()],
        }
    }

    /// Builds an element, reducing torsion residues into `[0, p_i)`.
    pub fn element(&self, free: Vec<BigInt>, torsion: &[i64]) -> Result<GroupElement> {
        if free.len() != self.free_rank || torsion.len() != self.moduli.len() {
            return Err(Error::SpecMismatch(format!(
                "element has {} free and {} torsion coordinates, group has {} and {}",
                free.len(),
                torsion.len(),
                self.free_rank,
                self.moduli.len()
            )));
        }
        let torsion = torsion
            .iter()
            .zip(&self.moduli)
            .map(|(&r, &p)| r.rem_euclid(p as i64) as u64)
            .collect();
        Ok(GroupElement { free, torsion })
    }

    /// Element of `ℤ^d` from small integer coordinates.
    pub fn free_element(&self, coords: &[i64]) -> Result<GroupElement> {
        let zeros = vec![0; self.moduli.len()];
        self.element(coords.iter().map(|&c| BigInt::from(c)).collect(), &zeros)
    }

    /// Element with zero free part and the given residues.
    pub fn torsion_element(&self, residues: &[i64]) -> Result<GroupElement> {
        self.element(vec![BigInt::zero(); self.free_rank], residues)
    }

    /// Checks that `a` belongs to this group.
    pub fn check(&self, a: &GroupElement) -> Result<()> {
        if a.free.len() != self.free_rank || a.torsion.len() != self.moduli.len() {
            return Err(Error::SpecMismatch(format!(
                "element {a} does not have the shape of group {self}"
            )));
        }
        if let Some((r, p)) = a.torsion.iter().zip(&self.moduli).find(|(r, p)| r >= p) {
            return Err(Error::SpecMismatch(format!(
                "residue {r} is not reduced modulo {p}"
            )));
        }
        Ok(())
    }

    pub fn combine(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.neg(a))
    }

    /// `γ^k`, i.e. `k·γ` in additive notation. Negative `k` is allowed.
    pub fn power(&self, a: &GroupElement, k: i64) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.scale(a, k))
    }

    // Unchecked group law for hot loops; callers guarantee shapes.
    pub(crate) fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .zip(&self.moduli)
                .map(|((&x, &y), &p)| ((x as u128 + y as u128) % p as u128) as u64)
                .collect(),
        }
    }

    pub(crate) fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            free: a.free.iter().map(|x| -x).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&self.moduli)
                .map(|(&x, &p)| if x == 0 { 0 } else { p - x })
                .collect(),
        }
    }

    pub(crate) fn scale(&self, a: &GroupElement, k: i64) -> GroupElement {
        GroupElement {
            free: a.free.iter().map(|x| x * k).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&self.moduli)
                .map(|(&x, &p)| (x as i128 * k as i128).rem_euclid(p as i128) as u64)
                .collect(),
        }
    }

    /// Value of the character `γ` at `x`: `exp(2πi(Σ γ_j x_j + Σ r_i y_i / p_i))`.
    pub fn evaluate(&self, a: &GroupElement, x: &DualPoint) -> Result<Complex64> {
        self.check(a)?;
        self.check_point(x)?;
        let phase = self.phase(a, x);
        let (s, c) = (2.0 * PI * phase).sin_cos();
        Ok(Complex64::new(c, s))
    }

    /// Phase of `γ(x)` as a fraction of a full turn, in `[0, 1)`.
    pub(crate) fn phase(&self, a: &GroupElement, x: &DualPoint) -> f64 {
        let mut total = 0.0;
        for (k, &xj) in a.free.iter().zip(&x.free) {
            total += frac_of_product(k, xj);
        }
        for ((&r, &y), &p) in a.torsion.iter().zip(&x.torsion).zip(&self.moduli) {
            let num = (r as u128 * y as u128) % p as u128;
            total += num as f64 / p as f64;
        }
        total.rem_euclid(1.0)
    }

    pub fn check_point(&self, x: &DualPoint) -> Result<()> {
        if x.free.len() != self.free_rank || x.torsion.len() != self.moduli.len() {
            return Err(Error::SpecMismatch(format!(
                "dual point has {} free and {} torsion coordinates, group has {} and {}",
                x.free.len(),
                x.torsion.len(),
                self.free_rank,
                self.moduli.len()
            )));
        }
        Ok(())
    }

    /// A dual point with free coordinates reduced mod 1 and residues reduced mod `p_i`.
    pub fn point(&self, free: &[f64], torsion: &[u64]) -> Result<DualPoint> {
        let x = DualPoint {
            free: free.iter().map(|v| v.rem_euclid(1.0)).collect(),
            torsion: torsion
                .iter()
                .zip(&self.moduli)
                .map(|(&r, &p)| r % p)
                .collect(),
        };
        self.check_point(&x)?;
        Ok(x)
    }

    pub fn origin(&self) -> DualPoint {
        DualPoint {
            free: vec![0.0; self.free_rank],
            torsion: vec![0; self.moduli.len()],
        }
    }

    /// Least `k ≥ 1` with `γ^k = 𝟏`, or infinite when a free coordinate is nonzero.
    pub fn element_order(&self, a: &GroupElement) -> Result<ElementOrder> {
        self.check(a)?;
        Ok(self.order_unchecked(a))
    }

    pub(crate) fn order_unchecked(&self, a: &GroupElement) -> ElementOrder {
        if a.free.iter().any(|x| !x.is_zero()) {
            return ElementOrder::Infinite;
        }
        let order = a
            .torsion
            .iter()
            .zip(&self.moduli)
            .fold(1u64, |acc, (&r, &p)| acc.lcm(&(p / r.gcd(&p))));
        ElementOrder::Finite(order)
    }

    /// `E_k = {γ^k : γ ∈ E}`, deduplicated in first-occurrence order.
    pub fn power_set(&self, set: &[GroupElement], k: i64) -> Result<PowerSet> {
        if k < 1 {
            return Err(Error::domain(format!("power_set needs k >= 1, got {k}")));
        }
        let mut seen = HashSet::new();
        let mut elems = Vec::new();
        let mut collisions = false;
        for a in set {
            let b = self.power(a, k)?;
            if seen.insert(b.clone()) {
                elems.push(b);
            } else {
                collisions = true;
            }
        }
        Ok(PowerSet { elems, collisions })
    }

    /// `γE`; a bijection of `E`.
    pub fn translate_set(&self, set: &[GroupElement], by: &GroupElement) -> Result<Vec<GroupElement>> {
        self.check(by)?;
        set.iter().map(|a| self.combine(a, by)).collect()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        parts.extend(self.moduli.iter().map(|p| format!("Z_{p}")));
        if parts.is_empty() {
            f.write_str("{0}")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl GroupElement {
    /// The integer `v` as an element of `ℤ`.
    pub fn integer(v: i64) -> Self {
        GroupElement {
            free: vec![BigInt::from(v)],
            torsion: Vec::new(),
        }
    }

    pub fn free_coords(&self) -> &[BigInt] {
        &self.free
    }

    pub fn torsion_coords(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_identity(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(|&r| r == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.torsion.is_empty() && self.free.len() == 1 {
            return write!(f, "{}", self.free[0]);
        }
        let free: Vec<String> = self.free.iter().map(ToString::to_string).collect();
        let tors: Vec<String> = self.torsion.iter().map(ToString::to_string).collect();
        write!(f, "({}|{})", free.join(","), tors.join(","))
    }
}

/// `frac(k·x)` computed exactly from the binary expansion of `x`, so that large
/// frequencies do not lose the phase to rounding.
pub(crate) fn frac_of_product(k: &BigInt, x: f64) -> f64 {
    if let Some(small) = k.to_i64() {
        return frac_of_product_i64(small, x);
    }
    if x == 0.0 || !x.is_finite() {
        return 0.0;
    }
    let (mant, exp, sign) = integer_decode(x);
    if exp >= 0 {
        return 0.0;
    }
    let shift = (-exp) as usize;
    let prod = k * BigInt::from(mant) * sign;
    let modulus = BigInt::one() << shift;
    let r = prod.mod_floor(&modulus);
    big_ratio_to_f64(&r, shift)
}

pub(crate) fn frac_of_product_i64(k: i64, x: f64) -> f64 {
    if x == 0.0 || k == 0 || !x.is_finite() {
        return 0.0;
    }
    let (mant, exp, sign) = integer_decode(x);
    if exp >= 0 {
        return 0.0;
    }
    let shift = (-exp) as u32;
    let prod = k as i128 * mant as i128 * sign as i128;
    if shift <= 126 {
        let modulus = 1i128 << shift;
        let r = prod.rem_euclid(modulus);
        (r as f64) * (-(shift as f64)).exp2()
    } else {
        // |prod| < 2^117 < 2^shift, so the fraction is prod·2^-shift itself (mod 1).
        let v = (prod as f64) * (-(shift as f64)).exp2();
        v.rem_euclid(1.0)
    }
}

fn big_ratio_to_f64(r: &BigInt, shift: usize) -> f64 {
    // r < 2^shift; keep the top 64 bits for the conversion.
    let bits = r.bits() as usize;
    if bits <= 64 {
        return r.to_f64().unwrap_or(0.0) * (-(shift as f64)).exp2();
    }
    let drop = bits - 64;
    let top: BigInt = r >> drop;
    top.to_f64().unwrap_or(0.0) * ((drop as f64) - shift as f64).exp2()
}

/// `x = sign · mant · 2^exp` with integer mantissa.
fn integer_decode(x: f64) -> (u64, i32, i64) {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let exponent = ((bits >> 52) & 0x7ff) as i32;
    let mantissa = if exponent == 0 {
        (bits & 0xf_ffff_ffff_ffff) << 1
    } else {
        (bits & 0xf_ffff_ffff_ffff) | 0x10_0000_0000_0000
    };
    (mantissa, exponent - 1075, sign)
}

// JSON wire format -------------------------------------------------------------

/// An integer that may arrive as a JSON number or a decimal string.
#[derive(Deserialize)]
#[serde(untagged)]
enum WireInt {
    Num(i64),
    Str(String),
}

impl WireInt {
    fn into_bigint(self) -> std::result::Result<BigInt, String> {
        match self {
            WireInt::Num(v) => Ok(BigInt::from(v)),
            WireInt::Str(s) => s
                .trim()
                .parse::<BigInt>()
                .map_err(|e| format!("bad integer {s:?}: {e}")),
        }
    }
}

/// Element as read from JSON, before it is attached to a group.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawElement {
    Int(WireInt),
    Full {
        #[serde(default)]
        free: Vec<WireInt>,
        #[serde(default)]
        torsion: Vec<i64>,
    },
}

/// Unvalidated element read from JSON; attach it to a group with [`GroupSpec::adopt`].
pub struct WireElement(RawElement);

impl<'de> Deserialize<'de> for WireElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        RawElement::deserialize(d).map(WireElement)
    }
}

impl GroupSpec {
    /// Validates a JSON element against this group. A bare integer is accepted
    /// as shorthand for an element of `ℤ`.
    pub fn adopt(&self, w: WireElement) -> Result<GroupElement> {
        match w.0 {
            RawElement::Int(v) => {
                let v = v.into_bigint().map_err(Error::Parse)?;
                self.element(vec![v], &[])
            }
            RawElement::Full { free, torsion } => {
                let free = free
                    .into_iter()
                    .map(WireInt::into_bigint)
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(Error::Parse)?;
                self.element(free, &torsion)
            }
        }
    }
}

pub(crate) fn bigint_to_json(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(i) => serde_json::Value::from(i),
        None => serde_json::Value::from(v.to_string()),
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let free: Vec<serde_json::Value> = self.free.iter().map(bigint_to_json).collect();
        let mut st = s.serialize_struct("GroupElement", 2)?;
        st.serialize_field("free", &free)?;
        st.serialize_field("torsion", &self.torsion)?;
        st.end()
    }
}

/// A finite subset of the group together with its group. Duplicates are dropped
/// on construction, keeping the first occurrence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElementSet {
    pub spec: GroupSpec,
    pub elems: Vec<GroupElement>,
}

impl ElementSet {
    pub fn new(spec: GroupSpec, elems: Vec<GroupElement>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut kept = Vec::with_capacity(elems.len());
        for a in elems {
            spec.check(&a)?;
            if seen.insert(a.clone()) {
                kept.push(a);
            }
        }
        Ok(ElementSet { spec, elems: kept })
    }

    /// A subset of `ℤ`.
    pub fn integers(values: &[i64]) -> Self {
        ElementSet {
            spec: GroupSpec::integers(),
            elems: dedup(values.iter().map(|&v| GroupElement::integer(v))),
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Wire {
            spec: GroupSpec,
            #[serde(alias = "elements")]
            elems: Vec<WireElement>,
        }
        let w: Wire = serde_json::from_str(text)?;
        let elems = w
            .elems
            .into_iter()
            .map(|e| w.spec.adopt(e))
            .collect::<Result<Vec<_>>>()?;
        ElementSet::new(w.spec, elems)
    }
}

impl<'de> Deserialize<'de> for ElementSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        ElementSet::from_json(&v.to_string()).map_err(de::Error::custom)
    }
}

fn dedup(iter: impl Iterator<Item = GroupElement>) -> Vec<GroupElement> {
    let mut seen = HashSet::new();
    iter.filter(|a| seen.insert(a.clone())).collect()
}
