use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::sampling::{for_each_slice, roots_table, FreePoly};
use super::TrigPolynomial;
use crate::error::{Error, Result};
use crate::group::DualPoint;

/// Cap on `points × terms` for one grid scan.
const GRID_WORK_CAP: u64 = 8_000_000_000;
/// Sample count per torsion point when no certified grid is available.
const UNCERTIFIED_SAMPLES: usize = 1 << 14;

/// Two-sided bound on `sup_x |P(x)|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupNormBound {
    /// Largest sampled `|P|`, attained at `witness`.
    pub lower: f64,
    /// Certified upper bound (see [`sup_norm_bounds`]).
    pub upper: f64,
    pub witness: DualPoint,
    /// Grid points per free coordinate.
    pub grid_size: Vec<usize>,
    pub grid_multiplier: u32,
    /// False when the free rank exceeds 2; `upper` is then only `Σ|P̂(γ)|`.
    pub certified: bool,
}

/// Sup-norm bracket from a uniform grid.
///
/// With half-spread `N_i` of the frequencies in free coordinate `i` and
/// `M_i = ⌈grid_multiplier·N_i⌉` grid points, Bernstein's inequality gives
/// `‖P‖ ≤ max_grid |P| / (1 − Σ_i π N_i / M_i)`. Torsion coordinates are
/// enumerated exactly. Free rank above 2 falls back to quasi-random sampling and
/// the trivial bound `Σ|P̂|`, flagged as uncertified.
pub fn sup_norm_bounds(p: &TrigPolynomial, grid_multiplier: u32) -> Result<SupNormBound> {
    if grid_multiplier <= 4 {
        return Err(Error::config(format!(
            "grid multiplier {grid_multiplier} is too small for a meaningful sup-norm certificate (need > 4)"
        )));
    }
    let spec = p.spec();
    let dim = spec.free_rank();
    if p.is_empty() {
        return Ok(SupNormBound {
            lower: 0.0,
            upper: 0.0,
            witness: spec.origin(),
            grid_size: vec![1; dim],
            grid_multiplier,
            certified: dim <= 2,
        });
    }
    if dim > 2 {
        return uncertified_bounds(p, grid_multiplier);
    }

    let half = global_half_ranges(p)?;
    let grid: Vec<usize> = half
        .iter()
        .map(|&n| ((grid_multiplier as f64 * n).ceil() as usize).max(1))
        .collect();
    let slack: f64 = half
        .iter()
        .zip(&grid)
        .map(|(&n, &m)| std::f64::consts::PI * n / m as f64)
        .sum();
    if slack >= 1.0 {
        return Err(Error::config(format!(
            "grid multiplier {grid_multiplier} leaves no certificate in {dim} free coordinates"
        )));
    }
    let points: u64 = grid.iter().map(|&m| m as u64).product();
    let work = points.saturating_mul(p.len() as u64);
    if work > GRID_WORK_CAP {
        return Err(Error::resource("sup-norm grid evaluations", GRID_WORK_CAP, work));
    }

    let mut best = (f64::NEG_INFINITY, spec.origin());
    for_each_slice(p, |slice| {
        let (v, idx) = slice.poly.grid_abs_max(&grid);
        if v > best.0 {
            let free = idx.iter().zip(&grid).map(|(&j, &m)| j as f64 / m as f64).collect();
            best = (
                v,
                DualPoint {
                    free,
                    torsion: slice.torsion,
                },
            );
        }
        Ok(())
    })?;

    let (lower, witness) = best;
    let rounding = 8.0 * f64::EPSILON * p.len() as f64 * p.coefficient_l1();
    Ok(SupNormBound {
        lower,
        upper: lower / (1.0 - slack) + rounding,
        witness,
        grid_size: grid,
        grid_multiplier,
        certified: true,
    })
}

fn global_half_ranges(p: &TrigPolynomial) -> Result<Vec<f64>> {
    let dim = p.spec().free_rank();
    let mut lo = vec![i64::MAX; dim];
    let mut hi = vec![i64::MIN; dim];
    for (g, _) in p.terms() {
        for (i, k) in g.free_coords().iter().enumerate() {
            let k = k
                .to_i64()
                .ok_or_else(|| Error::domain(format!("frequency {k} does not fit in 64 bits")))?;
            lo[i] = lo[i].min(k);
            hi[i] = hi[i].max(k);
        }
    }
    Ok(lo
        .iter()
        .zip(&hi)
        .map(|(&l, &h)| (h as f64 - l as f64) / 2.0)
        .collect())
}

fn uncertified_bounds(p: &TrigPolynomial, grid_multiplier: u32) -> Result<SupNormBound> {
    let dim = p.spec().free_rank();
    let steps = weyl_steps(dim);
    let mut best = (f64::NEG_INFINITY, p.spec().origin());
    for_each_slice(p, |slice| {
        let mut x = vec![0.0; dim];
        for j in 0..UNCERTIFIED_SAMPLES {
            for (xi, a) in x.iter_mut().zip(&steps) {
                *xi = (j as f64 * a).fract();
            }
            let v = slice.poly.eval(&x).norm();
            if v > best.0 {
                best = (
                    v,
                    DualPoint {
                        free: x.clone(),
                        torsion: slice.torsion.clone(),
                    },
                );
            }
        }
        Ok(())
    })?;
    Ok(SupNormBound {
        lower: best.0,
        upper: p.coefficient_l1(),
        witness: best.1,
        grid_size: vec![UNCERTIFIED_SAMPLES; dim],
        grid_multiplier,
        certified: false,
    })
}

/// Fractional parts of square roots of primes: a Kronecker sequence.
fn weyl_steps(dim: usize) -> Vec<f64> {
    const PRIMES: [f64; 12] = [2., 3., 5., 7., 11., 13., 17., 19., 23., 29., 31., 37.];
    (0..dim).map(|i| PRIMES[i % PRIMES.len()].sqrt().fract() + (i / PRIMES.len()) as f64 * 1e-3).collect()
}

/// `(mean |P|^exponent)^(1/exponent)` over a uniform grid of `grid` points per
/// free coordinate, with torsion coordinates enumerated exactly.
///
/// For even integer exponents the quadrature is exact once `grid` exceeds
/// `exponent` times the frequency spread.
pub fn lp_norm(p: &TrigPolynomial, exponent: f64, grid: usize) -> Result<f64> {
    if !(exponent >= 1.0) {
        return Err(Error::domain(format!("L^p norm needs p >= 1, got {exponent}")));
    }
    if grid == 0 {
        return Err(Error::config("quadrature grid must be nonempty"));
    }
    let dim = p.spec().free_rank();
    let points = (grid as u64).checked_pow(dim as u32).unwrap_or(u64::MAX);
    let work = points.saturating_mul(p.len().max(1) as u64);
    if work > GRID_WORK_CAP {
        return Err(Error::resource("L^p quadrature evaluations", GRID_WORK_CAP, work));
    }
    let table = roots_table(grid);
    let mut total = 0.0;
    let mut slices = 0u64;
    for_each_slice(p, |slice| {
        total += grid_power_sum(&slice.poly, grid, &table, exponent) / points as f64;
        slices += 1;
        Ok(())
    })?;
    Ok((total / slices as f64).powf(1.0 / exponent))
}

fn grid_power_sum(fp: &FreePoly, grid: usize, table: &[Complex64], exponent: f64) -> f64 {
    let dim = fp.dim;
    let reduced: Vec<usize> = fp
        .freqs
        .iter()
        .map(|&k| k.rem_euclid(grid as i64) as usize)
        .collect();
    let mut idx = vec![0usize; dim];
    let mut sum = 0.0;
    loop {
        let mut v = Complex64::new(0.0, 0.0);
        for (t, c) in fp.coeffs.iter().enumerate() {
            let mut z = *c;
            for i in 0..dim {
                let k = reduced[t * dim + i];
                z *= table[(k as u128 * idx[i] as u128 % grid as u128) as usize];
            }
            v += z;
        }
        sum += v.norm().powf(exponent);
        let mut i = 0;
        loop {
            if i == dim {
                return sum;
            }
            idx[i] += 1;
            if idx[i] < grid {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}
