//! Property tests for the group law, relation counting, interpolation and the
//! sup-norm certificates.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_complex::Complex64;
use proptest::prelude::*;
use sidonlab::interpolate::{classic_interpolate, InterpolationOptions, Phi};
use sidonlab::polynomial::sup_norm_bounds;
use sidonlab::relations::{
    count_relations, find_relations, independent_residual, is_n_degree_independent, relation_support_profile,
    Engine, RelationOptions, RemovalRule,
};
use sidonlab::sidon::{sidon_lower_bound, LowerBoundOptions};
use sidonlab::{ElementSet, GroupElement, GroupSpec, TrigPolynomial};

fn naive_count(values: &[i64], n: i64) -> u64 {
    let k = values.len() as u32;
    let base = (2 * n + 1) as u64;
    (0..base.pow(k))
        .filter(|&code| {
            let mut c = code;
            let mut sum = 0i64;
            for v in values {
                sum += ((c % base) as i64 - n) * v;
                c /= base;
            }
            sum == 0
        })
        .count() as u64
}

fn distinct(max_len: usize, range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::btree_set(range, 0..=max_len).prop_map(|s: BTreeSet<i64>| s.into_iter().collect())
}

fn torsion_spec() -> GroupSpec {
    GroupSpec::new(1, vec![4, 9]).unwrap()
}

fn mixed_element() -> impl Strategy<Value = GroupElement> {
    (-50i64..=50, 0i64..4, 0i64..9).prop_map(|(f, a, b)| {
        torsion_spec()
            .element(vec![f.into()], &[a, b])
            .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_law(a in mixed_element(), b in mixed_element(), c in mixed_element(), k in -7i64..=7) {
        let s = torsion_spec();
        let ab = s.combine(&a, &b).unwrap();
        prop_assert_eq!(&ab, &s.combine(&b, &a).unwrap());
        prop_assert_eq!(
            s.combine(&ab, &c).unwrap(),
            s.combine(&a, &s.combine(&b, &c).unwrap()).unwrap()
        );
        prop_assert!(s.combine(&a, &s.inverse(&a).unwrap()).unwrap().is_identity());
        let mut repeated = s.identity();
        for _ in 0..k.unsigned_abs() {
            repeated = s.combine(&repeated, &a).unwrap();
        }
        if k < 0 {
            repeated = s.inverse(&repeated).unwrap();
        }
        prop_assert_eq!(s.power(&a, k).unwrap(), repeated);
    }

    #[test]
    fn counts_match_enumeration(values in distinct(5, -30..=30), n in 1u32..=2) {
        let set = ElementSet::integers(&values);
        let report = count_relations(&set, n, &RelationOptions::default()).unwrap();
        prop_assert_eq!(&report.count, &BigUint::from(naive_count(&values, n as i64)));
        let profile = relation_support_profile(&set, n, &RelationOptions::default()).unwrap();
        prop_assert_eq!(profile.iter().sum::<BigUint>(), report.count);
    }

    #[test]
    fn engines_agree(values in distinct(7, -40..=40), n in 1u32..=3) {
        let set = ElementSet::integers(&values);
        let run = |engine| {
            let opts = RelationOptions { engine, ..RelationOptions::default() };
            (
                count_relations(&set, n, &opts).unwrap().count,
                relation_support_profile(&set, n, &opts).unwrap(),
                find_relations(&set, n, 5, &opts).unwrap().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            )
        };
        let dp = run(Engine::DynamicProgram);
        prop_assert_eq!(&dp, &run(Engine::MeetInTheMiddle));
        prop_assert_eq!(&dp, &run(Engine::Auto));
    }

    #[test]
    fn counts_survive_scaling(values in distinct(6, -25..=25), n in 1u32..=2, m in prop_oneof![-5i64..=-1, 1i64..=5]) {
        let scaled: Vec<i64> = values.iter().map(|v| v * m).collect();
        let a = count_relations(&ElementSet::integers(&values), n, &RelationOptions::default()).unwrap();
        let b = count_relations(&ElementSet::integers(&scaled), n, &RelationOptions::default()).unwrap();
        prop_assert_eq!(a.count, b.count);
    }

    #[test]
    fn residual_is_independent(values in distinct(8, 1..=30), n in 1u32..=2) {
        let set = ElementSet::integers(&values);
        let r = independent_residual(&set, n, RemovalRule::MostFrequent, &RelationOptions::default()).unwrap();
        prop_assert!(is_n_degree_independent(&r.kept, n, &RelationOptions::default()).unwrap());
        prop_assert!(r.kept.elems.iter().all(|g| set.elems.contains(g)));
    }

    #[test]
    fn classic_products_interpolate(
        exps in proptest::collection::btree_set(1u32..=7, 1..=4),
        data in proptest::collection::vec((0.0f64..=0.5, 0.0f64..1.0), 4),
    ) {
        let set = ElementSet::integers(&exps.iter().map(|&e| 3i64.pow(e)).collect::<Vec<_>>());
        let phi: Phi = set
            .elems
            .iter()
            .zip(&data)
            .map(|(g, &(r, t))| (g.clone(), Complex64::from_polar(r, std::f64::consts::TAU * t)))
            .collect();
        let out = classic_interpolate(&set, &phi, &InterpolationOptions::default()).unwrap();
        prop_assert!(out.certificate.residual <= 1e-12);
        prop_assert!((out.certificate.mass_at_identity - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
        prop_assert!(out.certificate.nonneg.as_ref().unwrap().certified);
    }

    #[test]
    fn sup_bounds_bracket_samples(
        terms in proptest::collection::vec((-12i64..=12, -1.0f64..1.0, -1.0f64..1.0), 1..6),
        x in 0.0f64..1.0,
    ) {
        let p = TrigPolynomial::from_terms(
            GroupSpec::integers(),
            terms.iter().map(|&(k, re, im)| (GroupElement::integer(k), Complex64::new(re, im))),
        ).unwrap();
        let b = sup_norm_bounds(&p, 16).unwrap();
        let at = p.evaluate(&GroupSpec::integers().point(&[x], &[]).unwrap()).unwrap().norm();
        prop_assert!(b.lower <= b.upper + 1e-12);
        prop_assert!(at <= b.upper + 1e-9);
        prop_assert!(b.upper <= p.coefficient_l1() / (1.0 - std::f64::consts::PI / 16.0) + 1e-9);
    }

    #[test]
    fn lower_bounds_are_at_least_one(values in distinct(4, -20..=20)) {
        prop_assume!(!values.is_empty());
        let opts = LowerBoundOptions { trials: 4, descent_rounds: 2, ..LowerBoundOptions::default() };
        let est = sidon_lower_bound(&ElementSet::integers(&values), &opts).unwrap();
        prop_assert!(est.lower >= 1.0 - 1e-9);
        prop_assert!(est.lower <= (values.len() as f64).sqrt() + 1e-9);
    }
}
