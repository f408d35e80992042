//! Trigonometric polynomials on the dual group, stored as finitely supported
//! coefficient maps on the discrete group.
//!
//! Positive measures built from these polynomials (Riesz products, peak
//! polynomials) are represented the same way; for such a measure the total mass
//! is the coefficient at the identity.

mod nonneg;
mod norms;
mod peak;
pub(crate) mod sampling;

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{DualPoint, GroupElement, GroupSpec, WireElement};

pub use nonneg::{is_nonnegative, is_nonnegative_with, NonnegCertificate, NonnegOptions};
pub use norms::{lp_norm, sup_norm_bounds, SupNormBound};
pub use peak::{
    build_fejer_peak_polynomial, build_peak_polynomial, triangle_coefficient, triangle_width, PeakKind,
    PeakPolynomial,
};

/// Left-operand terms handled per parallel task in [`TrigPolynomial::multiply`].
/// Fixed so that the summation order never depends on the thread count.
const MULTIPLY_CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplyOptions {
    /// Largest support the product may have.
    pub support_cap: usize,
    /// Coefficients with modulus at or below this value are dropped. Zero means
    /// only exact zeros are removed.
    pub prune_below: f64,
}

impl Default for MultiplyOptions {
    fn default() -> Self {
        MultiplyOptions {
            support_cap: 4_000_000,
            prune_below: 0.0,
        }
    }
}

/// `Σ_γ c_γ γ(x)` with finitely many nonzero `c_γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    spec: GroupSpec,
    coeffs: BTreeMap<GroupElement, Complex64>,
    pruned_below: f64,
}

impl TrigPolynomial {
    pub fn zero(spec: GroupSpec) -> Self {
        TrigPolynomial {
            spec,
            coeffs: BTreeMap::new(),
            pruned_below: 0.0,
        }
    }

    pub fn constant(spec: GroupSpec, c: Complex64) -> Self {
        let id = spec.identity();
        let mut p = Self::zero(spec);
        p.insert(id, c);
        p
    }

    /// `c·γ`.
    pub fn monomial(spec: GroupSpec, gamma: GroupElement, c: Complex64) -> Result<Self> {
        spec.check(&gamma)?;
        let mut p = Self::zero(spec);
        p.insert(gamma, c);
        Ok(p)
    }

    /// Sums repeated elements; exact zeros are dropped.
    pub fn from_terms(
        spec: GroupSpec,
        terms: impl IntoIterator<Item = (GroupElement, Complex64)>,
    ) -> Result<Self> {
        let mut p = Self::zero(spec);
        for (g, c) in terms {
            p.spec.check(&g)?;
            p.add_term(g, c);
        }
        p.coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(p)
    }

    fn insert(&mut self, g: GroupElement, c: Complex64) {
        if c != Complex64::new(0.0, 0.0) {
            self.coeffs.insert(g, c);
        }
    }

    pub(crate) fn add_term(&mut self, g: GroupElement, c: Complex64) {
        *self.coeffs.entry(g).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    /// Overwrites one coefficient, removing it when `c` is zero.
    pub(crate) fn set_coefficient(&mut self, g: GroupElement, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&g);
        } else {
            self.coeffs.insert(g, c);
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Number of stored (nonzero) coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Terms in canonical element order.
    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &Complex64)> {
        self.coeffs.iter()
    }

    /// Largest pruning threshold applied while building this polynomial.
    pub fn pruned_below(&self) -> f64 {
        self.pruned_below
    }

    /// Fourier coefficient at `γ`; zero off the support.
    pub fn coefficient(&self, gamma: &GroupElement) -> Complex64 {
        self.coeffs
            .get(gamma)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Integral over the dual group, i.e. the coefficient at the identity.
    pub fn mean(&self) -> Complex64 {
        self.coefficient(&self.spec.identity())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.spec.clone());
        out.pruned_below = self.pruned_below;
        for (g, c) in &self.coeffs {
            out.insert(g.clone(), c * s);
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.multiply_with(other, &MultiplyOptions::default())
    }

    /// Convolution of the coefficient maps.
    ///
    /// Work is split into fixed-size chunks of left terms, each accumulated in
    /// canonical order and merged in chunk order, so the result is bit-identical
    /// for any thread count.
    pub fn multiply_with(&self, other: &Self, opts: &MultiplyOptions) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch(format!(
                "cannot multiply polynomials on {} and {}",
                self.spec, other.spec
            )));
        }
        let left: Vec<(&GroupElement, &Complex64)> = self.coeffs.iter().collect();
        let right: Vec<(&GroupElement, &Complex64)> = other.coeffs.iter().collect();
        let cap = opts.support_cap;
        let spec = &self.spec;

        let partials: Vec<Result<Vec<(GroupElement, Complex64)>>> = left
            .par_chunks(MULTIPLY_CHUNK)
            .map(|chunk| {
                let mut acc: HashMap<GroupElement, usize> = HashMap::new();
                let mut order: Vec<(GroupElement, Complex64)> = Vec::new();
                for (ga, ca) in chunk {
                    for (gb, cb) in &right {
                        let g = spec.add(ga, gb);
                        let v = *ca * *cb;
                        match acc.get(&g) {
                            Some(&i) => order[i].1 += v,
                            None => {
                                acc.insert(g.clone(), order.len());
                                order.push((g, v));
                                if order.len() > cap {
                                    return Err(support_error(cap, order.len()));
                                }
                            }
                        }
                    }
                }
                Ok(order)
            })
            .collect();

        let mut merged: HashMap<GroupElement, Complex64> = HashMap::new();
        for part in partials {
            for (g, v) in part? {
                *merged.entry(g).or_insert(Complex64::new(0.0, 0.0)) += v;
            }
            if merged.len() > cap {
                return Err(support_error(cap, merged.len()));
            }
        }

        let threshold = opts.prune_below;
        let coeffs: BTreeMap<GroupElement, Complex64> = merged
            .into_iter()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0) && (threshold <= 0.0 || c.norm() > threshold))
            .collect();
        Ok(TrigPolynomial {
            spec: self.spec.clone(),
            coeffs,
            pruned_below: self.pruned_below.max(other.pruned_below).max(threshold.max(0.0)),
        })
    }

    /// `P(x) = Σ_γ P̂(γ) γ(x)`.
    pub fn evaluate(&self, x: &DualPoint) -> Result<Complex64> {
        self.spec.check_point(x)?;
        let mut sum = Complex64::new(0.0, 0.0);
        for (g, c) in &self.coeffs {
            let (s, co) = (2.0 * std::f64::consts::PI * self.spec.phase(g, x)).sin_cos();
            sum += c * Complex64::new(co, s);
        }
        Ok(sum)
    }

    /// Whether `P̂(γ⁻¹) = conj(P̂(γ))` for every `γ`, up to `tol` relative to the
    /// largest coefficient.
    pub fn is_real_valued(&self, tol: f64) -> bool {
        let scale = self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max);
        let allowed = tol * scale.max(f64::MIN_POSITIVE);
        self.coeffs.iter().all(|(g, c)| {
            let mirror = self.coefficient(&self.spec.neg(g));
            (mirror - c.conj()).norm() <= allowed
        })
    }

    /// `Σ |P̂(γ)|`, a trivial bound on the sup-norm.
    pub fn coefficient_l1(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// Exact `L²` norm by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct WireTerm {
            elem: WireElement,
            #[serde(default)]
            re: f64,
            #[serde(default)]
            im: f64,
        }
        #[derive(Deserialize)]
        struct Wire {
            spec: GroupSpec,
            terms: Vec<WireTerm>,
        }
        let w: Wire = serde_json::from_str(text)?;
        let terms = w
            .terms
            .into_iter()
            .map(|t| Ok((w.spec.adopt(t.elem)?, Complex64::new(t.re, t.im))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(w.spec, terms)
    }
}

fn support_error(cap: usize, got: usize) -> Error {
    Error::resource("polynomial support size", cap as u64, got as u64)
}

/// One coefficient on the wire.
#[derive(Serialize)]
struct WireTermOut<'a> {
    elem: &'a GroupElement,
    re: f64,
    im: f64,
}

impl Serialize for TrigPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<WireTermOut<'_>> = self
            .coeffs
            .iter()
            .map(|(g, c)| WireTermOut {
                elem: g,
                re: c.re,
                im: c.im,
            })
            .collect();
        let mut st = s.serialize_struct("TrigPolynomial", 3)?;
        st.serialize_field("spec", &self.spec)?;
        st.serialize_field("terms", &terms)?;
        st.serialize_field("pruned_below", &self.pruned_below)?;
        st.end()
    }
}
