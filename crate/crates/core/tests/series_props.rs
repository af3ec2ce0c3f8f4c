use mdsum::brackets::*;
use mdsum::exactnum::{factorial, rat};
use mdsum::{Composition, QSeries, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

fn series(max_order: usize) -> impl Strategy<Value = QSeries> {
    (1..=max_order).prop_flat_map(|n| {
        prop::collection::vec((-50i64..50, 1i64..7), n + 1).prop_map(|cs| {
            QSeries::from_coefficients(cs.into_iter().map(|(a, b)| rat(a, b)).collect())
        })
    })
}

fn composition(max_weight: u32) -> impl Strategy<Value = Composition> {
    prop::collection::vec(1u32..=max_weight, 1..=4)
        .prop_filter("weight", move |v| v.iter().sum::<u32>() <= max_weight)
        .prop_map(|v| Composition::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in series(12), b in series(12), c in series(12)) {
        let n = a.order().min(b.order()).min(c.order());
        let (a, b, c) = (a.truncate(n), b.truncate(n), c.truncate(n));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&(&b + &c)), &a.mul(&b) + &a.mul(&c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(a.mul(&QSeries::one(n)), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn derivative_is_a_derivation(a in series(15), b in series(15)) {
        let lhs = a.mul(&b).q_d_dq();
        let rhs = &a.q_d_dq().mul(&b) + &a.mul(&b.q_d_dq());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_order_bookkeeping(a in series(15), b in series(15)) {
        let p = a.mul(&b);
        prop_assert!(p.order() <= a.order() && p.order() <= b.order());
    }

    #[test]
    fn series_json_round_trip(a in series(10)) {
        let v = a.to_json();
        let back = QSeries::from_json(&v).unwrap();
        prop_assert_eq!(back.to_json(), v);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn bracket_starts_at_triangular_number(c in composition(9)) {
        let l = c.length();
        let t = l * (l + 1) / 2;
        let s = bracket_series(&c, t + 3);
        for n in 0..t {
            prop_assert_eq!(&s.coefficients()[n], &Rational::from_integer(0.into()));
        }
        let den = c.parts().iter().fold(BigInt::from(1), |acc, &p| acc * factorial(p as usize - 1));
        prop_assert_eq!(&s.coefficients()[t], &Rational::new(1.into(), den));
        prop_assert_eq!(leading_exponent(&c), t);
    }

    #[test]
    fn divisor_sums(r in prop::collection::vec(0u32..4, 1..=3), n in 1u64..40) {
        prop_assert!(multiple_divisor_sum(&r, n) >= BigInt::from(0));
    }

    #[test]
    fn classical_sigma(r in 0u32..6, n in 1u64..80) {
        let direct: BigInt = (1..=n).filter(|d| n % d == 0).map(|d| num_traits::pow(BigInt::from(d), r as usize)).sum();
        prop_assert_eq!(multiple_divisor_sum(&[r], n), direct);
    }
}

#[test]
fn primary_route_matches_oracle_to_weight_six() {
    for c in mdsum::exactnum::filtration_generators(6, 6, false) {
        assert_eq!(bracket_series(&c, 60), bracket_series_oracle(&c, 60), "{c}");
    }
}
