//! Nonnegative even polynomials `p` on `𝕋` with `p̂(0) = 1` and `p̂(±1)` close
//! to one. These are the building blocks of the small-constant Riesz products.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use super::TrigPolynomial;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};

/// Largest degree the triangle construction will produce.
const MAX_TRIANGLE_DEGREE: usize = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PeakKind {
    /// Truncated Fourier series of a narrow triangle, shifted and normalized.
    Triangle,
    /// The Fejér kernel of the smallest admissible degree.
    Fejer,
}

impl FromStr for PeakKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "triangle" => Ok(PeakKind::Triangle),
            "fejer" => Ok(PeakKind::Fejer),
            other => Err(Error::config(format!(
                "unknown peak polynomial {other:?} (expected triangle or fejer)"
            ))),
        }
    }
}

impl fmt::Display for PeakKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PeakKind::Triangle => "triangle",
            PeakKind::Fejer => "fejer",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakPolynomial {
    pub kind: PeakKind,
    pub epsilon: f64,
    /// Degree `N`.
    pub degree: usize,
    /// `η = ε/(2+ε)`; triangle construction only.
    pub eta: Option<f64>,
    /// Triangle half-width is `1/n`; triangle construction only.
    pub triangle_width: Option<u64>,
    /// `Σ_{|k|>N} f̂(k)`, the uniform truncation error; triangle construction only.
    pub tail_mass: Option<f64>,
    /// `p̂(0), …, p̂(N)`; the polynomial is even.
    pub coeffs: Vec<f64>,
}

impl PeakPolynomial {
    pub fn coefficient(&self, m: i64) -> f64 {
        self.coeffs
            .get(m.unsigned_abs() as usize)
            .copied()
            .unwrap_or(0.0)
    }

    /// `p̂(1)`, the ceiling for `|φ(γ)|` in a Riesz factor.
    pub fn peak_coefficient(&self) -> f64 {
        self.coefficient(1)
    }

    /// `p` as a polynomial on `ℤ`.
    pub fn to_polynomial(&self) -> TrigPolynomial {
        let n = self.degree as i64;
        TrigPolynomial::from_terms(
            GroupSpec::integers(),
            (-n..=n).map(|m| (GroupElement::integer(m), Complex64::new(self.coefficient(m), 0.0))),
        )
        .expect("integer elements always belong to Z")
    }
}

/// `f̂(k)` for the triangle `f(x) = n − n²|x|` on `[−1/n, 1/n]` (zero elsewhere),
/// which has unit mass: `f̂(k) = n² sin²(πk/n) / (πk)²`, `f̂(0) = 1`.
pub fn triangle_coefficient(n: u64, k: i64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let nf = n as f64;
    let s = (PI * k as f64 / nf).sin();
    nf * nf * s * s / (PI * PI * (k as f64) * (k as f64))
}

/// Smallest `n` with `|e^{2πit} − 1| < η/2` for all `|t| ≤ 1/n`.
///
/// The chord length `|e^{iθ} − 1| = 2|sin(θ/2)|` turns the condition into
/// `n > π / asin(η/4)`.
pub fn triangle_width(eta: f64) -> u64 {
    (PI / (eta / 4.0).asin()).floor() as u64 + 1
}

/// The shifted triangle construction.
///
/// With `η = ε/(2+ε)` (so that `(1−η)/(1+η) ≥ 1/(1+ε)`), `q` is the degree-`N`
/// truncation of the triangle's Fourier series, `N` minimal with discarded mass
/// at most `η/2`. Because every `f̂(k) ≥ 0`, that mass is exactly the uniform
/// error `‖f − q‖_∞`, so `q ≥ −η/2` and `p = (q + η/2)/(q̂(0) + η/2) ≥ 0`.
pub fn build_peak_polynomial(epsilon: f64) -> Result<PeakPolynomial> {
    check_epsilon(epsilon)?;
    let eta = epsilon / (2.0 + epsilon);
    let n = triangle_width(eta);
    let target = eta / 2.0;

    // tail(N) = f(0) − Σ_{|k|≤N} f̂(k) = n − 1 − 2 Σ_{k=1}^N f̂(k)
    let mut coeffs = vec![1.0];
    let mut partial = 0.0f64;
    let mut compensation = 0.0f64;
    let mut tail = n as f64 - 1.0;
    while tail > target {
        let k = coeffs.len();
        if k > MAX_TRIANGLE_DEGREE {
            return Err(Error::resource(
                "peak polynomial degree",
                MAX_TRIANGLE_DEGREE as u64,
                k as u64,
            ));
        }
        let c = triangle_coefficient(n, k as i64);
        coeffs.push(c);
        // Kahan summation keeps the tail accurate for large N.
        let y = 2.0 * c - compensation;
        let t = partial + y;
        compensation = (t - partial) - y;
        partial = t;
        tail = n as f64 - 1.0 - partial;
    }

    let norm = 1.0 + target;
    let mut p: Vec<f64> = coeffs.iter().map(|c| c / norm).collect();
    p[0] = 1.0;
    let peak = PeakPolynomial {
        kind: PeakKind::Triangle,
        epsilon,
        degree: p.len() - 1,
        eta: Some(eta),
        triangle_width: Some(n),
        tail_mass: Some(tail.max(0.0)),
        coeffs: p,
    };
    if peak.peak_coefficient() < 1.0 / (1.0 + epsilon) {
        return Err(Error::domain(format!(
            "triangle peak coefficient {} fell below 1/(1+ε)",
            peak.peak_coefficient()
        )));
    }
    Ok(peak)
}

/// The Fejér kernel `K_N`, `p̂(k) = 1 − |k|/(N+1)`, with the least `N` such that
/// `p̂(1) = N/(N+1) ≥ 1/(1+ε)`, i.e. `N = ⌈1/ε⌉`.
///
/// `K_N` is a squared modulus, hence nonnegative, and has far smaller degree than
/// the triangle construction for the same `ε`.
pub fn build_fejer_peak_polynomial(epsilon: f64) -> Result<PeakPolynomial> {
    check_epsilon(epsilon)?;
    let bound = 1.0 / (1.0 + epsilon);
    let mut n = ((1.0 / epsilon).ceil() as usize).max(1);
    while n > 1 && ((n - 1) as f64 / n as f64) >= bound {
        n -= 1;
    }
    while (n as f64 / (n + 1) as f64) < bound {
        n += 1;
    }
    if n > MAX_TRIANGLE_DEGREE {
        return Err(Error::resource("peak polynomial degree", MAX_TRIANGLE_DEGREE as u64, n as u64));
    }
    let coeffs = (0..=n)
        .map(|k| if k == 0 { 1.0 } else { (n + 1 - k) as f64 / (n + 1) as f64 })
        .collect();
    Ok(PeakPolynomial {
        kind: PeakKind::Fejer,
        epsilon,
        degree: n,
        eta: None,
        triangle_width: None,
        tail_mass: None,
        coeffs,
    })
}

impl PeakKind {
    pub fn build(self, epsilon: f64) -> Result<PeakPolynomial> {
        match self {
            PeakKind::Triangle => build_peak_polynomial(epsilon),
            PeakKind::Fejer => build_fejer_peak_polynomial(epsilon),
        }
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::domain(format!("ε must be positive and finite, got {epsilon}")));
    }
    Ok(())
}
