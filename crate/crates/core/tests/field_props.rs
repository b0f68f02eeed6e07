//! Field-level property tests: exact field axioms under canonical forms, the
//! ultrametric inequality, and truncation as a ring homomorphism.

use btk_core::field::{Field, Scalar, Valuation};
use btk_core::verify::sample::{rand_scalar, SuiteRng};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn qp(p: u64) -> Field {
    Field::qp(p).unwrap()
}

fn laurent(p: u64) -> Field {
    Field::laurent(p).unwrap()
}

fn q5_scalar(num: i64, den: i64) -> Scalar {
    qp(5).from_ratio(num, den.max(1)).unwrap()
}

fn l3_scalar(coeffs: &[u64], dcoeffs: &[u64]) -> Scalar {
    let f = laurent(3);
    let num = f.from_digits(0, coeffs);
    let mut d = f.from_digits(0, dcoeffs);
    if d.is_zero() {
        d = f.one();
    }
    &num * &d.inv().unwrap()
}

proptest! {
    #[test]
    fn qp_field_axioms(an in -500i64..500, ad in 1i64..60, bn in -500i64..500, bd in 1i64..60, cn in -500i64..500, cd in 1i64..60) {
        let a = q5_scalar(an, ad);
        let b = q5_scalar(bn, bd);
        let c = q5_scalar(cn, cd);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn laurent_field_axioms(a in prop::collection::vec(0u64..3, 0..4), ad in prop::collection::vec(0u64..3, 0..4),
                            b in prop::collection::vec(0u64..3, 0..4), bd in prop::collection::vec(0u64..3, 0..4)) {
        let a = l3_scalar(&a, &ad);
        let b = l3_scalar(&b, &bd);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        // canonical forms make equality structural: (a+b)-b == a exactly
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn qp_parse_print_roundtrip(n in -10_000i64..10_000, d in 1i64..500) {
        let x = q5_scalar(n, d);
        let f = qp(5);
        prop_assert_eq!(f.parse_scalar(&x.to_string()).unwrap(), x);
    }
}

#[test]
fn ultrametric_ten_thousand_pairs() {
    for field in [qp(2), qp(5), laurent(3)] {
        let mut rng = SuiteRng::seed_from_u64(2024);
        for _ in 0..10_000 {
            let x = rand_scalar(&mut rng, field, -6, 6);
            let y = rand_scalar(&mut rng, field, -6, 6);
            let vx = x.valuation();
            let vy = y.valuation();
            let vsum = (&x + &y).valuation();
            assert!(vsum >= vx.min(vy), "ultrametric failed: {x} + {y}");
            if vx != vy {
                assert_eq!(vsum, vx.min(vy), "strict case failed: {x} + {y}");
            }
            assert_eq!((&x * &y).valuation(), vx + vy);
        }
    }
}

#[test]
fn truncate_is_multiplicative() {
    for field in [qp(3), laurent(2)] {
        let mut rng = SuiteRng::seed_from_u64(99);
        for _ in 0..500 {
            let x = rand_scalar(&mut rng, field, 0, 5);
            let y = rand_scalar(&mut rng, field, 0, 5);
            let n = rng.gen_range(1..6u32);
            let lhs = (&x * &y).truncate(n).unwrap();
            let rhs = (&x.truncate(n).unwrap() * &y.truncate(n).unwrap())
                .truncate(n)
                .unwrap();
            assert_eq!(lhs, rhs, "truncate({x} * {y}, {n})");
        }
    }
}

#[test]
fn truncate_is_additive() {
    for field in [qp(3), laurent(2)] {
        let mut rng = SuiteRng::seed_from_u64(100);
        for _ in 0..500 {
            let x = rand_scalar(&mut rng, field, 0, 5);
            let y = rand_scalar(&mut rng, field, 0, 5);
            let n = rng.gen_range(1..6u32);
            let lhs = (&x + &y).truncate(n).unwrap();
            let rhs = (&x.truncate(n).unwrap() + &y.truncate(n).unwrap())
                .truncate(n)
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn residue_zero_iff_positive_valuation() {
    for field in [qp(5), laurent(5)] {
        let mut rng = SuiteRng::seed_from_u64(5);
        for _ in 0..300 {
            let x = rand_scalar(&mut rng, field, 0, 3);
            let r = x.residue().unwrap();
            assert_eq!(r == 0, x.valuation() >= Valuation::Finite(1), "residue of {x}");
            assert!(r < 5);
        }
    }
}
