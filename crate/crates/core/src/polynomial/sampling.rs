//! Slicing a polynomial along the torsion coordinates and evaluating the
//! remaining free-coordinate polynomial on grids or at arbitrary points.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::TrigPolynomial;
use crate::error::{Error, Result};
use crate::group::frac_of_product_i64;

/// Largest number of torsion points enumerated exactly.
pub(crate) const TORSION_POINT_CAP: u64 = 4_000_000;

/// The restriction of a polynomial to one torsion point: `Σ c_k e^{2πi k·x}` in
/// the free coordinates only.
#[derive(Debug, Clone)]
pub(crate) struct FreePoly {
    pub dim: usize,
    /// Row-major `len × dim` integer frequencies.
    pub freqs: Vec<i64>,
    pub coeffs: Vec<Complex64>,
}

impl FreePoly {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn freq(&self, t: usize) -> &[i64] {
        &self.freqs[t * self.dim..(t + 1) * self.dim]
    }

    pub fn coefficient_l1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Largest `|k_i|` in each coordinate.
    pub fn max_abs_freqs(&self) -> Vec<u64> {
        (0..self.dim)
            .map(|i| (0..self.len()).map(|t| self.freq(t)[i].unsigned_abs()).max().unwrap_or(0))
            .collect()
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (t, c) in self.coeffs.iter().enumerate() {
            sum += c * unit(self.phase(t, x));
        }
        sum
    }

    fn phase(&self, t: usize, x: &[f64]) -> f64 {
        let mut ph = 0.0;
        for (k, &xi) in self.freq(t).iter().zip(x) {
            ph += frac_of_product_i64(*k, xi);
        }
        ph
    }

    /// Real part, gradient and Hessian of the real part at `x` (`dim ≤ 2`).
    pub fn real_jet(&self, x: &[f64]) -> Jet {
        let mut jet = Jet::default();
        for (t, c) in self.coeffs.iter().enumerate() {
            let v = c * unit(self.phase(t, x));
            let k = self.freq(t);
            jet.value += v.re;
            // d/dx_i e^{2πi k·x} = 2πi k_i e^{...}
            for i in 0..self.dim {
                let wi = 2.0 * PI * k[i] as f64;
                jet.grad[i] += -wi * v.im;
                for j in 0..self.dim {
                    let wj = 2.0 * PI * k[j] as f64;
                    jet.hess[i][j] += -wi * wj * v.re;
                }
            }
        }
        jet
    }

    /// Max of `|f|` on the grid `x_i = j_i / m_i`, with the arg max.
    ///
    /// Phases are reduced in exact integer arithmetic and looked up in tables of
    /// roots of unity.
    pub fn grid_abs_max(&self, m: &[usize]) -> (f64, Vec<usize>) {
        assert_eq!(m.len(), self.dim);
        match self.dim {
            0 => (self.coeffs.iter().sum::<Complex64>().norm(), Vec::new()),
            1 => {
                let m0 = m[0];
                let table = roots_table(m0);
                let reduced: Vec<usize> = (0..self.len())
                    .map(|t| self.freq(t)[0].rem_euclid(m0 as i64) as usize)
                    .collect();
                let mut best = (f64::NEG_INFINITY, vec![0]);
                for j in 0..m0 {
                    let mut sum = Complex64::new(0.0, 0.0);
                    for (c, &k) in self.coeffs.iter().zip(&reduced) {
                        sum += c * table[(k as u128 * j as u128 % m0 as u128) as usize];
                    }
                    let a = sum.norm();
                    if a > best.0 {
                        best = (a, vec![j]);
                    }
                }
                best
            }
            2 => {
                let (m0, m1) = (m[0], m[1]);
                let (t0, t1) = (roots_table(m0), roots_table(m1));
                let reduced: Vec<(usize, usize)> = (0..self.len())
                    .map(|t| {
                        let k = self.freq(t);
                        (
                            k[0].rem_euclid(m0 as i64) as usize,
                            k[1].rem_euclid(m1 as i64) as usize,
                        )
                    })
                    .collect();
                let mut best = (f64::NEG_INFINITY, vec![0, 0]);
                for j0 in 0..m0 {
                    let row: Vec<Complex64> = self
                        .coeffs
                        .iter()
                        .zip(&reduced)
                        .map(|(c, &(k0, _))| c * t0[(k0 as u128 * j0 as u128 % m0 as u128) as usize])
                        .collect();
                    for j1 in 0..m1 {
                        let mut sum = Complex64::new(0.0, 0.0);
                        for (r, &(_, k1)) in row.iter().zip(&reduced) {
                            sum += r * t1[(k1 as u128 * j1 as u128 % m1 as u128) as usize];
                        }
                        let a = sum.norm();
                        if a > best.0 {
                            best = (a, vec![j0, j1]);
                        }
                    }
                }
                best
            }
            _ => unreachable!("grid evaluation is only used for free rank <= 2"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Jet {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: [[f64; 2]; 2],
}

pub(crate) fn unit(turns: f64) -> Complex64 {
    let (s, c) = (2.0 * PI * turns).sin_cos();
    Complex64::new(c, s)
}

/// `e^{2πij/m}` for `j < m`.
pub(crate) fn roots_table(m: usize) -> Vec<Complex64> {
    (0..m).map(|j| unit(j as f64 / m as f64)).collect()
}

/// One torsion point of the dual group together with the restricted polynomial.
pub(crate) struct Slice {
    /// Full torsion coordinate vector of the point.
    pub torsion: Vec<u64>,
    pub poly: FreePoly,
}

/// Enumerates the torsion coordinates that some term actually depends on and
/// calls `f` once per point. Untouched coordinates are fixed at zero.
pub(crate) fn for_each_slice(
    p: &TrigPolynomial,
    mut f: impl FnMut(Slice) -> Result<()>,
) -> Result<()> {
    let spec = p.spec();
    let dim = spec.free_rank();
    let moduli = spec.moduli();
    let touched: Vec<usize> = (0..moduli.len())
        .filter(|&i| p.terms().any(|(g, _)| g.torsion_coords()[i] != 0))
        .collect();
    let count = touched
        .iter()
        .try_fold(1u64, |acc, &i| acc.checked_mul(moduli[i]))
        .unwrap_or(u64::MAX);
    if count > TORSION_POINT_CAP {
        return Err(Error::resource(
            "torsion points to enumerate",
            TORSION_POINT_CAP,
            count,
        ));
    }

    let mut freqs = Vec::with_capacity(p.len() * dim);
    let mut base = Vec::with_capacity(p.len());
    let mut residues = Vec::with_capacity(p.len());
    for (g, c) in p.terms() {
        for k in g.free_coords() {
            freqs.push(k.to_i64().ok_or_else(|| {
                Error::domain(format!("frequency {k} does not fit in 64 bits; cannot sample"))
            })?);
        }
        base.push(*c);
        residues.push(touched.iter().map(|&i| g.torsion_coords()[i]).collect::<Vec<_>>());
    }

    let mut point = vec![0u64; touched.len()];
    loop {
        let mut torsion = vec![0u64; moduli.len()];
        for (slot, &i) in touched.iter().enumerate() {
            torsion[i] = point[slot];
        }
        let coeffs: Vec<Complex64> = base
            .iter()
            .zip(&residues)
            .map(|(c, r)| {
                let mut turns = 0.0;
                for (slot, &i) in touched.iter().enumerate() {
                    let p_i = moduli[i] as u128;
                    turns += ((r[slot] as u128 * point[slot] as u128) % p_i) as f64 / p_i as f64;
                }
                if turns == 0.0 {
                    *c
                } else {
                    c * unit(turns)
                }
            })
            .collect();
        f(Slice {
            torsion,
            poly: merge_equal_freqs(dim, &freqs, coeffs),
        })?;

        // mixed-radix increment
        let mut slot = 0;
        loop {
            if slot == touched.len() {
                return Ok(());
            }
            point[slot] += 1;
            if point[slot] < moduli[touched[slot]] {
                break;
            }
            point[slot] = 0;
            slot += 1;
        }
    }
}

/// Terms arrive sorted by free coordinates (canonical element order), so equal
/// frequencies are adjacent.
fn merge_equal_freqs(dim: usize, freqs: &[i64], coeffs: Vec<Complex64>) -> FreePoly {
    let mut out = FreePoly {
        dim,
        freqs: Vec::new(),
        coeffs: Vec::new(),
    };
    for (t, c) in coeffs.into_iter().enumerate() {
        let k = &freqs[t * dim..(t + 1) * dim];
        let n = out.coeffs.len();
        if n > 0 && out.freq(n - 1) == k {
            out.coeffs[n - 1] += c;
        } else {
            out.freqs.extend_from_slice(k);
            out.coeffs.push(c);
        }
    }
    out
}
