//! Certified lower bounds for real-valued trigonometric polynomials.
//!
//! The free coordinates are covered by boxes. On a box with center `c` and
//! half-widths `r` the second-order Taylor model of `Re P` at `c` is minimized
//! exactly per coordinate, the mixed term is bounded by `|∂₀∂₁P| r₀ r₁`, and the
//! cubic remainder is bounded by `(1/6) Σ |P̂(γ)| (2π Σ_i |γ_i| r_i)³`. Boxes whose
//! bound is inconclusive are bisected. Torsion coordinates are enumerated exactly.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::sampling::{for_each_slice, roots_table, FreePoly, Jet};
use super::TrigPolynomial;
use crate::error::{Error, Result};
use crate::group::DualPoint;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonnegOptions {
    /// The polynomial is certified when its lower bound is at least `-tolerance`.
    pub tolerance: f64,
    /// Initial boxes per free coordinate, per unit of degree.
    pub initial_multiplier: u32,
    /// Total box budget before giving up.
    pub max_cells: u64,
    pub max_depth: u32,
}

impl Default for NonnegOptions {
    fn default() -> Self {
        NonnegOptions {
            tolerance: 1e-9,
            initial_multiplier: 8,
            max_cells: 20_000_000,
            max_depth: 48,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonnegCertificate {
    /// Smallest value of `Re P` seen at a box center.
    pub min_sampled: f64,
    /// Rigorous lower bound on `Re P` (up to floating-point evaluation error,
    /// which is budgeted explicitly). Only meaningful when `certified`.
    pub lower_bound: f64,
    pub certified: bool,
    pub tolerance: f64,
    /// Where `min_sampled` was attained.
    pub witness: DualPoint,
    /// Boxes examined.
    pub cells: u64,
}

pub fn is_nonnegative(p: &TrigPolynomial, tolerance: f64) -> Result<NonnegCertificate> {
    is_nonnegative_with(
        p,
        &NonnegOptions {
            tolerance,
            ..NonnegOptions::default()
        },
    )
}

pub fn is_nonnegative_with(p: &TrigPolynomial, opts: &NonnegOptions) -> Result<NonnegCertificate> {
    if !p.is_real_valued(1e-9) {
        return Err(Error::domain(
            "nonnegativity is only defined for real-valued polynomials",
        ));
    }
    let dim = p.spec().free_rank();
    let mut cert = NonnegCertificate {
        min_sampled: f64::INFINITY,
        lower_bound: f64::INFINITY,
        certified: true,
        tolerance: opts.tolerance,
        witness: p.spec().origin(),
        cells: 0,
    };
    if p.is_empty() {
        cert.min_sampled = 0.0;
        cert.lower_bound = 0.0;
        return Ok(cert);
    }
    let mut budget = opts.max_cells;
    for_each_slice(p, |slice| {
        let out = if dim > 2 {
            sampled_only(&slice.poly)
        } else {
            certify_slice(&slice.poly, opts, &mut budget)
        };
        cert.cells += out.cells;
        if out.min_sampled < cert.min_sampled {
            cert.min_sampled = out.min_sampled;
            cert.witness = DualPoint {
                free: out.witness,
                torsion: slice.torsion.clone(),
            };
        }
        cert.lower_bound = cert.lower_bound.min(out.lower_bound);
        cert.certified &= out.certified;
        Ok(())
    })?;
    Ok(cert)
}

struct SliceOutcome {
    min_sampled: f64,
    witness: Vec<f64>,
    lower_bound: f64,
    certified: bool,
    cells: u64,
}

#[derive(Clone)]
struct Cell {
    center: [f64; 2],
    radius: [f64; 2],
}

fn rounding_slack(fp: &FreePoly) -> f64 {
    16.0 * f64::EPSILON * (fp.len() as f64 + 4.0) * fp.coefficient_l1()
}

fn certify_slice(fp: &FreePoly, opts: &NonnegOptions, budget: &mut u64) -> SliceOutcome {
    let dim = fp.dim;
    let slack = rounding_slack(fp);
    if dim == 0 {
        let v: f64 = fp.coeffs.iter().map(|c| c.re).sum();
        let lb = v - slack;
        return SliceOutcome {
            min_sampled: v,
            witness: Vec::new(),
            lower_bound: lb,
            certified: lb >= -opts.tolerance,
            cells: 1,
        };
    }

    let degree = fp.max_abs_freqs();
    let grid: Vec<usize> = degree
        .iter()
        .map(|&d| if d == 0 { 1 } else { (opts.initial_multiplier as usize * d as usize).max(2) })
        .collect();
    let abs_freqs: Vec<[f64; 2]> = (0..fp.len())
        .map(|t| {
            let k = fp.freq(t);
            let mut a = [0.0; 2];
            for i in 0..dim {
                a[i] = k[i].unsigned_abs() as f64;
            }
            a
        })
        .collect();
    let mags: Vec<f64> = fp.coeffs.iter().map(|c| c.norm()).collect();

    // Initial level: centers (2j+1)/(2M), phases read from tables of 2M-th roots.
    let tables: Vec<Vec<Complex64>> = grid.iter().map(|&m| roots_table(2 * m)).collect();
    let mut initial = Vec::new();
    let mut idx = vec![0usize; dim];
    loop {
        let mut cell = Cell {
            center: [0.0; 2],
            radius: [0.0; 2],
        };
        for i in 0..dim {
            cell.center[i] = (2 * idx[i] + 1) as f64 / (2 * grid[i]) as f64;
            cell.radius[i] = if degree[i] == 0 { 0.0 } else { 0.5 / grid[i] as f64 };
        }
        initial.push((cell, idx.clone()));
        let mut i = 0;
        loop {
            if i == dim {
                break;
            }
            idx[i] += 1;
            if idx[i] < grid[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == dim {
            break;
        }
    }

    let total_initial = initial.len() as u64;
    let mut out = SliceOutcome {
        min_sampled: f64::INFINITY,
        witness: vec![0.0; dim],
        lower_bound: f64::INFINITY,
        certified: true,
        cells: 0,
    };
    if total_initial > *budget {
        out.certified = false;
        out.lower_bound = f64::NEG_INFINITY;
        return out;
    }

    let evaluate_initial = |(cell, idx): &(Cell, Vec<usize>)| {
        let jet = jet_from_units(fp, |t| {
            let k = fp.freq(t);
            let mut z = Complex64::new(1.0, 0.0);
            for i in 0..dim {
                let m2 = 2 * grid[i] as i128;
                let j = (k[i] as i128 * (2 * idx[i] as i128 + 1)).rem_euclid(m2) as usize;
                z *= tables[i][j];
            }
            z
        });
        (cell.clone(), jet)
    };
    let mut level: Vec<(Cell, Jet)> = initial.par_iter().map(evaluate_initial).collect();

    let mut depth = 0;
    loop {
        out.cells += level.len() as u64;
        *budget = budget.saturating_sub(level.len() as u64);
        let bounds: Vec<f64> = level
            .par_iter()
            .map(|(cell, jet)| box_lower_bound(jet, cell, dim, &abs_freqs, &mags) - slack)
            .collect();

        let mut pending = Vec::new();
        let mut negative = false;
        for ((cell, jet), lb) in level.iter().zip(&bounds) {
            if jet.value < out.min_sampled {
                out.min_sampled = jet.value;
                out.witness = cell.center[..dim].to_vec();
            }
            if *lb >= -opts.tolerance {
                out.lower_bound = out.lower_bound.min(*lb);
            } else if jet.value - slack < -opts.tolerance {
                negative = true;
                out.lower_bound = out.lower_bound.min(*lb);
            } else {
                pending.push((cell.clone(), *lb));
            }
        }
        if negative {
            out.certified = false;
            for (_, lb) in &pending {
                out.lower_bound = out.lower_bound.min(*lb);
            }
            return out;
        }
        if pending.is_empty() {
            return out;
        }
        let children = pending.len() as u64 * (1 << dim);
        if depth >= opts.max_depth || children > *budget {
            out.certified = false;
            for (_, lb) in &pending {
                out.lower_bound = out.lower_bound.min(*lb);
            }
            return out;
        }
        let next: Vec<Cell> = pending.iter().flat_map(|(c, _)| split(c, dim)).collect();
        level = next
            .into_par_iter()
            .map(|cell| {
                let jet = fp.real_jet(&cell.center[..dim]);
                (cell, jet)
            })
            .collect();
        depth += 1;
    }
}

fn jet_from_units(fp: &FreePoly, unit_at: impl Fn(usize) -> Complex64) -> Jet {
    use std::f64::consts::PI;
    let mut jet = Jet::default();
    for (t, c) in fp.coeffs.iter().enumerate() {
        let v = c * unit_at(t);
        let k = fp.freq(t);
        jet.value += v.re;
        for i in 0..fp.dim {
            let wi = 2.0 * PI * k[i] as f64;
            jet.grad[i] += -wi * v.im;
            for j in 0..fp.dim {
                let wj = 2.0 * PI * k[j] as f64;
                jet.hess[i][j] += -wi * wj * v.re;
            }
        }
    }
    jet
}

/// `min_{|t| ≤ r} g·t + ½ h t²`.
fn quadratic_min(g: f64, h: f64, r: f64) -> f64 {
    let at = |t: f64| g * t + 0.5 * h * t * t;
    let mut m = at(r).min(at(-r));
    if h > 0.0 {
        let t = -g / h;
        if t.abs() <= r {
            m = m.min(at(t));
        }
    }
    m
}

fn box_lower_bound(jet: &Jet, cell: &Cell, dim: usize, abs_freqs: &[[f64; 2]], mags: &[f64]) -> f64 {
    use std::f64::consts::PI;
    let mut lb = jet.value;
    for i in 0..dim {
        lb += quadratic_min(jet.grad[i], jet.hess[i][i], cell.radius[i]);
    }
    if dim == 2 {
        lb -= jet.hess[0][1].abs() * cell.radius[0] * cell.radius[1];
    }
    let mut remainder = 0.0;
    for (a, m) in abs_freqs.iter().zip(mags) {
        let mut s = 0.0;
        for i in 0..dim {
            s += a[i] * cell.radius[i];
        }
        let w = 2.0 * PI * s;
        remainder += m * w * w * w;
    }
    lb - remainder / 6.0
}

fn split(cell: &Cell, dim: usize) -> Vec<Cell> {
    let mut out = vec![cell.clone()];
    for i in 0..dim {
        if cell.radius[i] == 0.0 {
            continue;
        }
        let half = cell.radius[i] / 2.0;
        out = out
            .into_iter()
            .flat_map(|c| {
                let mut lo = c.clone();
                let mut hi = c;
                lo.center[i] -= half;
                hi.center[i] += half;
                lo.radius[i] = half;
                hi.radius[i] = half;
                [lo, hi]
            })
            .collect();
    }
    out
}

fn sampled_only(fp: &FreePoly) -> SliceOutcome {
    let dim = fp.dim;
    let mut best = (f64::INFINITY, vec![0.0; dim]);
    let mut x = vec![0.0; dim];
    for j in 0..(1usize << 14) {
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = (j as f64 * (i as f64 + 2.0).sqrt()).fract();
        }
        let v = fp.eval(&x).re;
        if v < best.0 {
            best = (v, x.clone());
        }
    }
    SliceOutcome {
        min_sampled: best.0,
        witness: best.1,
        lower_bound: f64::NEG_INFINITY,
        certified: false,
        cells: 1 << 14,
    }
}
