use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use inhomog_core::ncf::ncf_digits;
use inhomog_core::numerics::real::sqrt_handle;
use inhomog_core::numerics::{compare, surd_from_periodic_ncf};
use inhomog_core::{PeriodicWord, RealHandle, Surd};

const RADICANDS: [i64; 6] = [2, 3, 5, 21, 165, 1001];

fn surd_in(d: i64) -> impl Strategy<Value = Surd> {
    (-10_000i64..10_000, -500i64..500, 1i64..2_000)
        .prop_map(move |(a, b, c)| Surd::new(a.into(), b.into(), c.into(), d.into()))
}

fn surd_pair() -> impl Strategy<Value = (Surd, Surd)> {
    prop::sample::select(&RADICANDS[..]).prop_flat_map(|d| (surd_in(d), surd_in(d)))
}

fn surd_triple() -> impl Strategy<Value = (Surd, Surd, Surd)> {
    prop::sample::select(&RADICANDS[..]).prop_flat_map(|d| (surd_in(d), surd_in(d), surd_in(d)))
}

fn ncf_word() -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
    (
        prop::collection::vec(2u32..=9, 0..=3),
        prop::collection::vec(2u32..=9, 1..=4),
    )
        .prop_filter("period of 2s only", |(_, per)| per.iter().any(|&a| a > 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn addition_round_trips((x, y) in surd_pair()) {
        prop_assert_eq!(&(&x + &y) - &y, x);
    }

    #[test]
    fn multiplication_round_trips((x, y) in surd_pair()) {
        prop_assume!(!y.is_zero());
        prop_assert_eq!(&(&x * &y) / &y, x);
    }

    #[test]
    fn ordering_is_antisymmetric_and_transitive((x, y, z) in surd_triple()) {
        prop_assert_eq!(x.cmp(&y), y.cmp(&x).reverse());
        if x <= y && y <= z {
            prop_assert!(x <= z);
        }
        let fx = x.to_f64();
        let fy = y.to_f64();
        if (fx - fy).abs() > 1e-9 * (1.0 + fx.abs()) {
            prop_assert_eq!(x < y, fx < fy);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn handle_comparison_matches_exact_order(n in 2u64..500, p in 1i64..10_000, q in 1i64..400) {
        let r = BigRational::new(BigInt::from(p), BigInt::from(q));
        let exact = Surd::new(0.into(), 1.into(), 1.into(), n.into());
        let expected = exact.cmp(&Surd::from_rational(&r));
        prop_assert_eq!(compare(&RealHandle::from_surd(exact), &r).unwrap(), expected);
        prop_assert_eq!(compare(&sqrt_handle(n, 512), &r).unwrap(), expected);
        let flipped = compare(&RealHandle::Rational(r.clone()), &r).unwrap();
        prop_assert_eq!(flipped, Ordering::Equal);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn periodic_value_expands_back_to_its_digits((pre, period) in ncf_word()) {
        let value = surd_from_periodic_ncf(&pre, &period).unwrap();
        let word = PeriodicWord::new(pre, period).unwrap();
        let got = ncf_digits(&RealHandle::from_surd(value), 60).unwrap();
        prop_assert_eq!(got.digits, word.prefix(60));
    }
}
