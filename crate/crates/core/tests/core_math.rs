mod common;

use apsidon::epoly::{bnorm2_sq, bnorm4_pow4, sidon_bound_pow4, sum_abs_pow4, EPolynomial, Gaussian};
use apsidon::rational::{int, ratio, Rational};
use apsidon::sets::{
    count_quadruples, dirichlet_gamma4_pow4, gamma, is_sidon, sidon_energy, sidon_witness, sumset, FiniteSet, Sign,
};
use num::{BigUint, Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-200i64..=200, 1i64..=100).prop_map(|(p, q)| ratio(p, q))
}

fn elements(max: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::btree_set(rational(), 0..=max).prop_map(|s| s.into_iter().collect())
}

fn small_int_set(max: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::btree_set(-15i64..=15, 0..=max).prop_map(|s| s.into_iter().map(int).collect())
}

fn either_set() -> impl Strategy<Value = Vec<Rational>> {
    prop_oneof![elements(10), small_int_set(10)]
}

proptest! {
    #[test]
    fn sidon_and_energy_match_brute_force(e in either_set()) {
        let s = common::set(&e);
        let energy = count_quadruples(&s);
        prop_assert_eq!(energy.clone(), BigUint::from(common::quadruples(&e)));
        prop_assert_eq!(is_sidon(&s), common::is_sidon(&e));
        prop_assert_eq!(is_sidon(&s), energy == sidon_energy(e.len()));
    }

    #[test]
    fn witness_is_a_real_relation(e in small_int_set(8)) {
        let s = common::set(&e);
        match sidon_witness(&s) {
            None => prop_assert!(is_sidon(&s)),
            Some(q) => {
                prop_assert!(q.holds());
                prop_assert_eq!(&q.values[0] + &q.values[1], &q.values[2] + &q.values[3]);
                for (v, &i) in q.values.iter().zip(&q.indices) {
                    prop_assert_eq!(v, &s.elements()[i]);
                }
                let mut lhs = [q.indices[0], q.indices[1]];
                let mut rhs = [q.indices[2], q.indices[3]];
                lhs.sort();
                rhs.sort();
                prop_assert_ne!(lhs, rhs);
            }
        }
    }

    #[test]
    fn affine_invariance(e in either_set(), a in rational(), b in rational()) {
        prop_assume!(!a.is_zero());
        let s = common::set(&e);
        let t = s.affine_image(&a, &b);
        prop_assert_eq!(count_quadruples(&t), count_quadruples(&s));
        prop_assert_eq!(is_sidon(&t), is_sidon(&s));
    }

    #[test]
    fn gamma_is_monotone(small in small_int_set(5), extra in small_int_set(3)) {
        let m = common::set(&small);
        let big = m.union(&common::set(&extra));
        let g = gamma(&m);
        prop_assert!(g.is_subset(&gamma(&big)));
        prop_assert!(m.is_subset(&g));
        prop_assert!(g.contains(&int(0)));
    }

    #[test]
    fn sumset_size_bound(a in elements(8), b in elements(8)) {
        let (sa, sb) = (common::set(&a), common::set(&b));
        prop_assert!(sumset(&sa, &sb, Sign::Plus).len() <= a.len() * b.len());
        prop_assert!(sumset(&sa, &sb, Sign::Minus).len() <= a.len() * b.len());
    }

    #[test]
    fn bnorm4_matches_quadruple_sum(
        e in small_int_set(6),
        coeffs in prop::collection::vec((rational(), rational()), 6),
    ) {
        let f = EPolynomial::from_terms(e.iter().cloned().zip(coeffs.into_iter().map(|(re, im)| Gaussian::new(re, im))));
        let brute = common::bnorm4_pow4(&f);
        prop_assert!(brute.im.is_zero());
        prop_assert_eq!(bnorm4_pow4(&f), brute.re);
    }

    #[test]
    fn norm_identity_on_sidon_supports(
        seed in any::<u64>(),
        n in 0usize..=8,
        coeffs in prop::collection::vec((rational(), rational()), 8),
    ) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let support = common::random_sidon(&mut rng, n);
        let f = EPolynomial::from_terms(support.into_iter().zip(coeffs.into_iter().map(|(re, im)| Gaussian::new(re, im))));
        let b2 = bnorm2_sq(&f);
        let b4 = bnorm4_pow4(&f);
        prop_assert_eq!(&b4, &(int(2) * &b2 * &b2 - sum_abs_pow4(&f)));
        prop_assert_eq!(&b4, &sidon_bound_pow4(&f));
        prop_assert!(b4 <= int(2) * &b2 * &b2);
    }

    #[test]
    fn finite_set_json_round_trip(e in elements(10)) {
        let s = common::set(&e);
        let json = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<FiniteSet>(&json).unwrap(), s);
    }
}

#[test]
fn dirichlet_closed_form_matches_brute_force() {
    for n in 1..=12u64 {
        assert_eq!(dirichlet_gamma4_pow4(n).unwrap(), BigUint::from(common::dirichlet(n as i64)), "N = {n}");
    }
}

#[test]
fn dirichlet_relative_error_bound() {
    // |3·γ₄⁴ / (2N³) − 1| ≤ 1/N², exactly
    for n in 1..=300u64 {
        let g = Rational::from_integer(dirichlet_gamma4_pow4(n).unwrap().into());
        let n3 = int(n as i64).pow(3);
        let rel = (int(3) * g / (int(2) * n3) - int(1)).abs();
        assert!(rel <= ratio(1, (n * n) as i64), "N = {n}");
    }
    assert!(dirichlet_gamma4_pow4(0).is_err());
}

#[test]
fn energy_of_empty_and_singleton() {
    assert_eq!(count_quadruples(&FiniteSet::empty()), BigUint::zero());
    assert_eq!(count_quadruples(&FiniteSet::from_ints(&[3])), BigUint::from(1u32));
}
