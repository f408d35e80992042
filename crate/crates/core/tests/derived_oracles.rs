//! Worked values checked against independent brute-force oracles. Each frozen
//! constant below was produced by the oracle next to it, and both the oracle and
//! the library are compared against it.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sidonlab::extract::{
    binomial_gate_check, expected_relation_count, extract_independent_subset, extract_small_constant_subset,
    random_thin, split_coset, ExtractionParams, SmallConstantParams,
};
use sidonlab::interpolate::{
    certify_family, classic_riesz_product, riesz_interpolate, FamilyOptions, InterpolationOptions, Phi, Route,
};
use sidonlab::polynomial::{
    build_peak_polynomial, is_nonnegative, lp_norm, sup_norm_bounds, triangle_coefficient, PeakKind,
};
use sidonlab::relations::{
    count_relations, find_relation, independent_residual, is_n_degree_independent, is_n_length_independent,
    is_quasi_independent, RelationOptions, RemovalRule,
};
use sidonlab::sidon::{
    exp_moment_check, lambda_p_check, product_integral, sidon_lower_bound, sidon_upper_bound,
    two_element_constant_mod_p, LowerBoundOptions,
};
use sidonlab::{ElementSet, Error, GroupElement, GroupSpec, TrigPolynomial};

fn opts() -> RelationOptions {
    RelationOptions::default()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// All vectors in `{−n..n}^k` with `Σ m_i v_i = 0`.
fn brute_relations(values: &[i64], n: i64) -> Vec<Vec<i64>> {
    let k = values.len();
    let mut out = Vec::new();
    let mut m = vec![-n; k];
    loop {
        if m.iter().zip(values).map(|(a, b)| a * b).sum::<i64>() == 0 {
            out.push(m.clone());
        }
        let mut i = 0;
        while i < k && m[i] == n {
            m[i] = -n;
            i += 1;
        }
        if i == k {
            return out;
        }
        m[i] += 1;
    }
}

fn zpoly(terms: &[(i64, Complex64)]) -> TrigPolynomial {
    TrigPolynomial::from_terms(
        GroupSpec::integers(),
        terms.iter().map(|&(k, v)| (GroupElement::integer(k), v)),
    )
    .unwrap()
}

fn eval_z(terms: &BTreeMap<i64, Complex64>, x: f64) -> Complex64 {
    terms.iter().map(|(&k, &v)| v * Complex64::from_polar(1.0, 2.0 * PI * k as f64 * x)).sum()
}

/// Naive convolution of coefficient maps on ℤ.
fn convolve(a: &BTreeMap<i64, Complex64>, b: &BTreeMap<i64, Complex64>) -> BTreeMap<i64, Complex64> {
    let mut out = BTreeMap::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            *out.entry(ka + kb).or_insert(c(0.0, 0.0)) += va * vb;
        }
    }
    out
}

#[test]
fn identity_coefficient_of_product_is_a_pairing() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let mut rand_terms = || -> Vec<(i64, Complex64)> {
            (0..5).map(|_| (rng.gen_range(-6..=6), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))).collect()
        };
        let (tp, tq) = (rand_terms(), rand_terms());
        let (p, q) = (zpoly(&tp), zpoly(&tq));
        let prod = p.multiply(&q).unwrap();
        let pairing: Complex64 = p
            .terms()
            .map(|(g, v)| v * q.coefficient(&GroupSpec::integers().inverse(g).unwrap()))
            .sum();
        let direct = convolve(
            &p.terms().map(|(g, v)| (g.free_coords()[0].clone().try_into().unwrap(), *v)).collect(),
            &q.terms().map(|(g, v)| (g.free_coords()[0].clone().try_into().unwrap(), *v)).collect(),
        );
        let at_zero = direct.get(&0).copied().unwrap_or_default();
        assert!((prod.mean() - pairing).norm() < 1e-12);
        assert!((prod.mean() - at_zero).norm() < 1e-12);
    }
}

#[test]
fn sup_bounds_bracket_a_dense_scan() {
    // Oracle: max over 10⁶ equispaced points of |e(x) + e(2x) + e(5x)|.
    const SCAN_MAX: f64 = 3.0;
    let terms: BTreeMap<i64, Complex64> = [1, 2, 5].into_iter().map(|k| (k, c(1.0, 0.0))).collect();
    let scan = (0..1_000_000).map(|j| eval_z(&terms, j as f64 / 1e6).norm()).fold(0.0, f64::max);
    assert!((scan - SCAN_MAX).abs() < 1e-12);
    let p = zpoly(&[(1, c(1.0, 0.0)), (2, c(1.0, 0.0)), (5, c(1.0, 0.0))]);
    for g in [8, 64, 512] {
        let b = sup_norm_bounds(&p, g).unwrap();
        assert!(b.lower <= SCAN_MAX + 1e-12 && SCAN_MAX <= b.upper, "{b:?}");
    }
}

#[test]
fn l4_norm_of_lacunary_polynomials() {
    let set = ElementSet::integers(&(1..=6).map(|k| 3i64.pow(k)).collect::<Vec<_>>());
    let r = lambda_p_check(&set, 2.0, 4, 100, 3).unwrap();
    assert!(r.worst_ratio <= 1.0, "{r:?}");
    // Oracle: plain Riemann sum at 2¹⁶ points for a ±1 pattern.
    let signs = [1.0, -1.0, 1.0, 1.0, -1.0, -1.0];
    let terms: BTreeMap<i64, Complex64> = (1..=6).zip(signs).map(|(k, s)| (3i64.pow(k), c(s, 0.0))).collect();
    let grid = 1 << 16;
    let l4 = ((0..grid).map(|j| eval_z(&terms, j as f64 / grid as f64).norm().powi(4)).sum::<f64>() / grid as f64).powf(0.25);
    let p = zpoly(&terms.iter().map(|(&k, &v)| (k, v)).collect::<Vec<_>>());
    assert!((lp_norm(&p, 4.0, grid).unwrap() - l4).abs() < 1e-9);
    assert!(l4 <= 2.0 * 2.0 * 2.0 * 6f64.sqrt());
}

#[test]
fn peak_for_epsilon_one() {
    let peak = build_peak_polynomial(1.0).unwrap();
    assert!((peak.eta.unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(peak.coefficient(0), 1.0);
    assert!(peak.coefficient(1) >= 0.5 && peak.coefficient(-1) >= 0.5);
    let fejer = PeakKind::Fejer.build(0.5).unwrap();
    assert!(is_nonnegative(&fejer.to_polynomial(), 1e-9).unwrap().certified);
}

#[test]
fn triangle_coefficients_match_quadrature() {
    // Oracle: midpoint rule for ∫ max(n − n²|x|, 0) e^{−2πikx} dx.
    let n = 7u64;
    let quad = |k: i64| {
        let steps = 200_000;
        (0..steps)
            .map(|j| {
                let x = (j as f64 + 0.5) / steps as f64 - 0.5;
                let f = (n as f64 - (n * n) as f64 * x.abs()).max(0.0);
                f * (2.0 * PI * k as f64 * x).cos()
            })
            .sum::<f64>()
            / steps as f64
    };
    let mut total = 0.0;
    for k in -300i64..=300 {
        let v = triangle_coefficient(n, k);
        assert!(v >= 0.0);
        if k.abs() <= 10 {
            assert!((v - quad(k)).abs() < 1e-8, "k={k}");
        }
        total += v;
    }
    // The tail beyond |k| = 300 is below n²/(π²·300).
    assert!((total - n as f64).abs() < (n * n) as f64 / (PI * PI * 300.0));
}

#[test]
fn small_relation_counts() {
    const COUNT_123_N1: u64 = 3;
    const COUNT_3_9_27_N2: u64 = 1;
    assert_eq!(brute_relations(&[1, 2, 3], 1).len() as u64, COUNT_123_N1);
    assert_eq!(brute_relations(&[3, 9, 27], 2).len() as u64, COUNT_3_9_27_N2);
    assert_eq!(count_relations(&ElementSet::integers(&[1, 2, 3]), 1, &opts()).unwrap().count, COUNT_123_N1.into());
    assert_eq!(count_relations(&ElementSet::integers(&[3, 9, 27]), 2, &opts()).unwrap().count, COUNT_3_9_27_N2.into());

    let rel = find_relation(&ElementSet::integers(&[1, 2, 3]), 1, &opts()).unwrap().unwrap();
    let exps: Vec<i64> = [1, 2, 3].iter().map(|&v| rel.exponent(&GroupElement::integer(v))).collect();
    assert_eq!(exps, vec![1, 1, -1]);
    assert!(find_relation(&ElementSet::integers(&[3, 9, 27]), 2, &opts()).unwrap().is_none());

    let fives = [5, 25, 125, 625];
    assert_eq!(brute_relations(&fives, 3).len(), 1);
    assert!(is_n_degree_independent(&ElementSet::integers(&fives), 3, &opts()).unwrap());
}

#[test]
fn length_independence_of_one_two_three() {
    // Oracle: every relation with entries in {0, ±1} uses all three elements.
    let short = brute_relations(&[1, 2, 3], 1)
        .into_iter()
        .filter(|m| m.iter().any(|&x| x != 0) && m.iter().filter(|&&x| x != 0).count() <= 2)
        .count();
    assert_eq!(short, 0);
    assert!(is_n_length_independent(&ElementSet::integers(&[1, 2, 3]), 2, &opts()).unwrap().independent);
}

#[test]
fn residuals() {
    let r = independent_residual(&ElementSet::integers(&[1, 2, 3]), 1, RemovalRule::MostFrequent, &opts()).unwrap();
    assert_eq!(r.kept.len(), 2);
    assert!(is_quasi_independent(&r.kept).unwrap());
    let d = ElementSet::integers(&[3, 9, 27]);
    let r = independent_residual(&d, 2, RemovalRule::MostFrequent, &opts()).unwrap();
    assert_eq!(r.kept, d);
}

#[test]
fn thinning_variance() {
    let f = ElementSet::integers(&(1..=40).collect::<Vec<_>>());
    let lambda = 0.25;
    let sizes: Vec<f64> = (0..10_000).map(|s| random_thin(&f, lambda, s).unwrap().len() as f64).collect();
    let mean = sizes.iter().sum::<f64>() / sizes.len() as f64;
    let var = sizes.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (sizes.len() - 1) as f64;
    let expected = 40.0 * (lambda / 2.0 - lambda * lambda / 4.0);
    // Sampling error of a variance over 10⁴ draws is a few percent.
    assert!((var - expected).abs() < 0.1 * expected, "{var} vs {expected}");
    assert!(var <= 40.0 * lambda / 2.0 * 1.1);
}

/// Exact `∫∏(1 + λ Σ_{k≤n} Re γ^k)` by expanding on ℤ with rational coefficients.
fn product_integral_oracle(values: &[i64], n: i64, lambda: &BigRational) -> BigRational {
    let half = lambda / BigRational::from_integer(2.into());
    let mut acc: BTreeMap<i64, BigRational> = BTreeMap::from([(0, BigRational::from_integer(1.into()))]);
    for &v in values {
        let mut next: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (k, a) in &acc {
            *next.entry(*k).or_insert_with(|| BigRational::from_integer(0.into())) += a.clone();
            for j in 1..=n {
                for s in [j * v, -j * v] {
                    *next.entry(k + s).or_insert_with(|| BigRational::from_integer(0.into())) += a * &half;
                }
            }
        }
        acc = next;
    }
    acc.remove(&0).unwrap_or_else(|| BigRational::from_integer(0.into()))
}

#[test]
fn expected_counts_are_exact() {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    const ONE_TWO_THREE_FIFTH: (i64, i64) = (501, 500);
    assert_eq!(product_integral_oracle(&[3, 9, 27], 1, &q(1, 5)), q(1, 1));
    assert_eq!(product_integral_oracle(&[1, 2, 3], 1, &q(1, 5)), q(ONE_TWO_THREE_FIFTH.0, ONE_TWO_THREE_FIFTH.1));
    let e = expected_relation_count(&ElementSet::integers(&[3, 9, 27]), 1, 0.2, &opts()).unwrap();
    assert_eq!(e.exact, q(1, 1));
    let e = expected_relation_count(&ElementSet::integers(&[1, 2, 3]), 1, 0.2, &opts()).unwrap();
    assert_eq!(e.exact, q(ONE_TWO_THREE_FIFTH.0, ONE_TWO_THREE_FIFTH.1));
    assert_eq!(e.value, 1.002);

    let three = product_integral(&ElementSet::integers(&[3, 9, 27]), 2, &q(1, 4), &opts()).unwrap();
    assert_eq!(three.exact, product_integral_oracle(&[3, 9, 27], 2, &q(1, 4)));
    assert_eq!(three.exact, q(1, 1));
}

#[test]
fn extraction_from_an_interval() {
    let f = ElementSet::integers(&(1..=20).collect::<Vec<_>>());
    let mut params = ExtractionParams::new(1);
    params.seed = 0;
    let out = extract_independent_subset(&f, &params).unwrap();
    let values: Vec<i64> = out
        .h
        .elems
        .iter()
        .map(|g| g.free_coords()[0].clone().try_into().unwrap())
        .collect();
    assert!(values.len() >= 2, "{values:?}");
    assert_eq!(brute_relations(&values, 1).len(), 1);
}

#[test]
fn independent_input_passes_gates_often() {
    let f = ElementSet::integers(&(1..=12).map(|k| 3i64.pow(k)).collect::<Vec<_>>());
    let mut params = ExtractionParams::new(1);
    params.max_attempts = 1;
    let mut good = 0;
    for seed in 0..1000 {
        params.seed = seed;
        let out = extract_independent_subset(&f, &params).unwrap();
        if !out.gates_failed && out.achieved_ratio >= params.lambda / 4.0 {
            good += 1;
        }
    }
    assert!(good >= 250, "{good}");
}

#[test]
fn gate_corner_cases() {
    let r = binomial_gate_check(&[40], &[0.9]).unwrap();
    assert!(r.all_hold);
    let r = binomial_gate_check(&[2], &[0.0]).unwrap();
    assert_eq!(r.rows[0].k, 1);
    assert!((2f64.powf(r.rows[0].bound_log2) - 2.0 * std::f64::consts::E).abs() < 1e-9);
    assert!(r.all_hold);
}

#[test]
fn coset_split_pigeonhole() {
    let spec = GroupSpec::new(0, vec![2, 3, 101, 103]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let elems: Vec<GroupElement> = (0..30)
        .map(|_| {
            spec.torsion_element(&[rng.gen_range(0..2), rng.gen_range(0..3), rng.gen_range(0..101), rng.gen_range(0..103)])
                .unwrap()
        })
        .collect();
    let set = ElementSet::new(spec, elems).unwrap();
    let split = split_coset(&set, 3).unwrap();
    assert_eq!((split.n0, split.m), (2, 6));
    assert_eq!(split.fiber_sizes.iter().sum::<usize>(), set.len());
    assert_eq!(split.fiber.len(), *split.fiber_sizes.iter().max().unwrap());
    assert!(split.fiber.len() * 6 >= set.len());
    assert!(split.y.iter().all(|g| g.torsion_coords()[..2] == [0, 0]));
}

#[test]
fn small_constant_pipeline() {
    let fives = ElementSet::integers(&(1..=6).map(|k| 5i64.pow(k)).collect::<Vec<_>>());
    assert_eq!(brute_relations(&(1..=6).map(|k| 5i64.pow(k)).collect::<Vec<_>>(), 3).len(), 1);
    let out = extract_small_constant_subset(&fives, 0.5, &SmallConstantParams::default()).unwrap();
    assert!(out.h.elems.iter().all(|g| fives.elems.contains(g)));
    assert!((out.sidon_bound - 1.5).abs() < 1e-9 || out.h.is_empty());

    let ap = ElementSet::integers(&(1..=30).collect::<Vec<_>>());
    let out = extract_small_constant_subset(&ap, 1.0, &SmallConstantParams::default()).unwrap();
    assert!(!out.h.is_empty());
    assert!(out.certificate.all_nonneg_certified && out.certificate.worst_residual < 1e-10);
    assert!((out.sidon_bound - 2.0).abs() < 1e-9);
}

#[test]
fn classic_single_imaginary_value() {
    let e = ElementSet::integers(&[3]);
    let phi: Phi = [(GroupElement::integer(3), c(0.0, 0.5))].into_iter().collect();
    let p = classic_riesz_product(&e, &phi, &InterpolationOptions::default()).unwrap();
    assert_eq!(p.coefficient(&GroupElement::integer(0)), c(1.0, 0.0));
    assert_eq!(p.coefficient(&GroupElement::integer(3)), c(0.0, 0.5));
    assert_eq!(p.coefficient(&GroupElement::integer(-3)), c(0.0, -0.5));
    // Oracle: 1 − sin(6πx) on a fine grid has minimum 0 at x = 1/12.
    let grid_min = (0..120_000)
        .map(|j| 1.0 - (6.0 * PI * j as f64 / 120_000.0).sin())
        .fold(f64::INFINITY, f64::min);
    assert!(grid_min.abs() < 1e-12);
    let cert = is_nonnegative(&p, 1e-9).unwrap();
    assert!(cert.certified && cert.min_sampled.abs() < 1e-4);
}

#[test]
fn peak_product_matches_direct_convolution() {
    let set = ElementSet::integers(&[5, 25, 125, 625]);
    let peak = PeakKind::Fejer.build(0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..5 {
        let values: Vec<Complex64> = (0..4)
            .map(|_| Complex64::from_polar(rng.gen::<f64>() * 2.0 / 3.0, 2.0 * PI * rng.gen::<f64>()))
            .collect();
        let phi: Phi = set.elems.iter().cloned().zip(values.iter().copied()).collect();
        let out = riesz_interpolate(&set, &phi, &peak, &InterpolationOptions::default()).unwrap();
        assert!(out.certificate.residual < 1e-10);
        assert_eq!(out.certificate.mass_at_identity, c(1.0, 0.0));

        // Oracle: build each factor from its defining formula and convolve.
        let mut acc = BTreeMap::from([(0i64, c(1.0, 0.0))]);
        for (v, gamma) in values.iter().zip([5i64, 25, 125, 625]) {
            let w = v.norm() / peak.peak_coefficient();
            let u = v / v.norm();
            let mut factor = BTreeMap::from([(0i64, c(1.0 - w, 0.0))]);
            for m in -2i64..=2 {
                *factor.entry(m * gamma).or_insert(c(0.0, 0.0)) += w * peak.coefficient(m) * u.powi(m as i32);
            }
            acc = convolve(&acc, &factor);
        }
        for (&k, v) in &acc {
            assert!((out.polynomial.coefficient(&GroupElement::integer(k)) - v).norm() < 1e-12);
        }
        for (g, v) in &phi {
            assert!((acc[&g.free_coords()[0].clone().try_into().unwrap()] - v).norm() < 1e-12);
        }
    }
}

#[test]
fn planted_relation_is_named() {
    let set = ElementSet::integers(&[5, 25, 30, 625]);
    let phi: Phi = set.elems.iter().map(|g| (g.clone(), c(0.5, 0.0))).collect();
    let err = riesz_interpolate(&set, &phi, &PeakKind::Fejer.build(0.5).unwrap(), &InterpolationOptions::default())
        .unwrap_err();
    match err {
        Error::NotIndependent { degree, relation } => {
            assert_eq!(degree, 3);
            assert!(relation.contains("(5)") && relation.contains("(25)") && relation.contains("(30)"), "{relation}");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn sidon_estimates() {
    let lb = LowerBoundOptions::default();
    let pair = sidon_lower_bound(&ElementSet::integers(&[1, 2]), &lb).unwrap();
    assert!((pair.lower - 1.0).abs() < 1e-9);

    // Oracle for {1,2,3}: best real sign pattern by a 10⁶-point scan.
    let mut best_sign = 0.0f64;
    for signs in [[1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [1.0, -1.0, 1.0], [1.0, -1.0, -1.0]] {
        let terms: BTreeMap<i64, Complex64> = (1..=3).zip(signs).map(|(k, s)| (k, c(s, 0.0))).collect();
        let sup = (0..1_000_000).map(|j| eval_z(&terms, j as f64 / 1e6).norm()).fold(0.0, f64::max);
        best_sign = best_sign.max(3.0 / sup);
    }
    const BEST_SIGN_RATIO: f64 = 1.341640786499874;
    assert!((best_sign - BEST_SIGN_RATIO).abs() < 1e-9, "{best_sign}");
    let est = sidon_lower_bound(&ElementSet::integers(&[1, 2, 3]), &lb).unwrap();
    assert!(est.lower_certified && est.lower > 1.001);
    // The certified value is a true lower bound for the witness itself.
    let w: BTreeMap<i64, Complex64> = est
        .witness
        .iter()
        .map(|t| (t.elem.free_coords()[0].clone().try_into().unwrap(), c(t.re, t.im)))
        .collect();
    let sup = (0..1_000_000).map(|j| eval_z(&w, j as f64 / 1e6).norm()).fold(0.0, f64::max);
    let mass: f64 = w.values().map(|v| v.norm()).sum();
    assert!(est.lower <= mass / sup + 1e-12);

    let fives = ElementSet::integers(&[5, 25, 125, 625]);
    let up = sidon_upper_bound(&fives, &Route::Peak(PeakKind::Fejer.build(0.5).unwrap()), &FamilyOptions::default())
        .unwrap();
    assert!((up.upper.unwrap() - 1.5).abs() < 1e-9);
    let classic = sidon_upper_bound(&ElementSet::integers(&[3, 9, 27]), &Route::Classic, &FamilyOptions::default())
        .unwrap();
    assert!((classic.upper.unwrap() - 2.0).abs() < 1e-9);
    let family = certify_family(&ElementSet::integers(&[3, 9, 27]), &Route::Classic, &FamilyOptions::default()).unwrap();
    assert!(family.unconditional);
}

#[test]
fn two_element_oracles() {
    // Oracle: direct maximization over a fine (r, θ) grid.
    let oracle = |p: u64| {
        let mut best = 0.0f64;
        for i in 0..=200 {
            let r = i as f64 / 200.0;
            for j in 0..=400 {
                let theta = 2.0 * PI / p as f64 * j as f64 / 400.0;
                let worst = (0..p)
                    .map(|k| (c(1.0, 0.0) + Complex64::from_polar(r, theta + 2.0 * PI * k as f64 / p as f64)).norm())
                    .fold(0.0, f64::max);
                best = best.max((1.0 + r) / worst);
            }
        }
        best
    };
    const SQRT2: f64 = std::f64::consts::SQRT_2;
    const TWO_OVER_SQRT3: f64 = 1.1547005383792515;
    assert!((oracle(2) - SQRT2).abs() < 1e-9);
    assert!((oracle(3) - TWO_OVER_SQRT3).abs() < 1e-9);
    assert!(two_element_constant_mod_p(2).unwrap().value >= SQRT2 - 1e-9);
    assert!(two_element_constant_mod_p(3).unwrap().value >= TWO_OVER_SQRT3 - 1e-9);
}

#[test]
fn exp_moment_is_stable_under_refinement() {
    let a = ElementSet::integers(&[3, 9, 27]);
    let coarse = exp_moment_check(&a, &[0.3, 0.3, 0.3], 512).unwrap();
    let fine = exp_moment_check(&a, &[0.3, 0.3, 0.3], 1024).unwrap();
    assert!((coarse.lhs - fine.lhs).abs() < 1e-12);
    assert!(fine.lhs <= (fine.fitted_k * 0.27).exp() * (1.0 + 1e-12));
    assert!(fine.fitted_k > 0.0 && fine.fitted_k < 0.5);
}
