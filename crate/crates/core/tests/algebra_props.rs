use mdsum::exactnum::{filtration_generators, int};
use mdsum::quasishuffle::*;
use mdsum::{Composition, OnePolynomial, WordSum};
use proptest::prelude::*;

fn composition(max_weight: u32) -> impl Strategy<Value = Composition> {
    prop::collection::vec(1u32..=max_weight, 1..=4)
        .prop_filter("weight", move |v| v.iter().sum::<u32>() <= max_weight)
        .prop_map(|v| Composition::new(v).unwrap())
}

fn word_sum(max_weight: u32) -> impl Strategy<Value = WordSum> {
    prop::collection::vec((composition(max_weight), -6i64..6), 1..=3).prop_map(|ts| {
        let mut w = WordSum::zero();
        for (c, x) in ts {
            w.add_term(c, int(x));
        }
        w
    })
}

#[test]
fn commutative_on_all_pairs() {
    let words = filtration_generators(5, 5, false);
    for w in &words {
        for v in &words {
            assert_eq!(quasi_shuffle_words(w, v), quasi_shuffle_words(v, w), "{w} {v}");
        }
    }
}

#[test]
fn associative_on_small_triples() {
    let words = filtration_generators(5, 5, false);
    for a in &words {
        for b in &words {
            for c in &words {
                if a.weight() + b.weight() + c.weight() > 5 {
                    continue;
                }
                let (a, b, c) = (WordSum::word(a.clone()), WordSum::word(b.clone()), WordSum::word(c.clone()));
                assert_eq!(
                    quasi_shuffle(&quasi_shuffle(&a, &b), &c),
                    quasi_shuffle(&a, &quasi_shuffle(&b, &c))
                );
            }
        }
    }
}

#[test]
fn filtration_on_all_pairs() {
    let words = filtration_generators(5, 5, false);
    for w in &words {
        for v in &words {
            let p = quasi_shuffle_words(w, v);
            assert!(p.weight() <= w.weight() + v.weight());
            assert!(p.max_length() <= w.length() + v.length());
            assert!(respects_filtration(w, v));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn homomorphism(w in word_sum(5), v in word_sum(5)) {
        let order = 100;
        prop_assert_eq!(evaluate(&quasi_shuffle(&w, &v), order), evaluate(&w, order).mul(&evaluate(&v, order)));
    }

    #[test]
    fn associative_random(a in word_sum(4), b in word_sum(3), c in word_sum(3)) {
        prop_assert_eq!(quasi_shuffle(&quasi_shuffle(&a, &b), &c), quasi_shuffle(&a, &quasi_shuffle(&b, &c)));
    }

    #[test]
    fn decomposition_round_trip(w in word_sum(6)) {
        let p = decompose_in_one(&w);
        prop_assert_eq!(p.evaluate(100), evaluate(&w, 100));
        for coeff in p.powers() {
            prop_assert!(subalgebra_membership(coeff, Subalgebra::Mda));
        }
        prop_assert_eq!(decompose_in_one(&(&w - &w)), OnePolynomial::zero());
        prop_assert_eq!(decompose_in_one(&w), p);
    }

    #[test]
    fn word_sum_json_round_trip(w in word_sum(6)) {
        let v = w.to_json();
        let back = WordSum::from_json(&v).unwrap();
        prop_assert_eq!(back.to_json(), v);
        prop_assert_eq!(WordSum::parse(&w.to_string()).unwrap(), w.clone());
        let p = decompose_in_one(&w);
        prop_assert_eq!(OnePolynomial::from_json(&p.to_json()).unwrap(), p);
    }
}
