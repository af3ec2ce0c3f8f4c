use mdsum::brackets::bracket_series;
use mdsum::modular::*;
use mdsum::Composition;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn identities_at_random_orders(n in 20usize..90) {
        let r = verify_quasi_modular_identities(n).unwrap();
        prop_assert!(r.all_pass());
        let back: ModularReport = serde_json::from_value(r.to_json()).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn eisenstein_tail(k in 1u32..8, n in 5usize..60) {
        let g = eisenstein(2 * k, n).unwrap();
        let c = Composition::new(vec![2 * k]).unwrap();
        let b = bracket_series(&c, n);
        prop_assert_eq!(g.series.tail(), b.tail());
    }
}

#[test]
fn delta_representations_have_no_residual() {
    let reps: Vec<_> = DELTA_PAIRS
        .iter()
        .map(|&(a, b)| delta_representation(a, b, 90).unwrap())
        .collect();
    let delta = mdsum::qseries::eta24(120);
    for r in &reps {
        assert_eq!(mdsum::quasishuffle::evaluate(&r.body, 120), delta, "({}, {})", r.a, r.b);
    }
    let lambda = deltal2_combination(&reps).unwrap();
    let total: mdsum::Rational = lambda.iter().sum();
    assert_eq!(total, mdsum::exactnum::int(1));
}

#[test]
fn congruence_to_two_hundred() {
    assert!(tau_congruence(200).iter().all(|c| c.pass));
}
