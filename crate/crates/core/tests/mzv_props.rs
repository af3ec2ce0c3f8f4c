use mdsum::exactnum::{binomial, rational_to_f64};
use mdsum::linrel::proven_relation_pool;
use mdsum::mzvlimit::*;
use mdsum::{brackets::bracket_series, Composition};
use proptest::prelude::*;

fn z(parts: &[u32]) -> f64 {
    mzv(&Composition::new(parts.to_vec()).unwrap(), 1e-15).unwrap().to_f64()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn stuffle(a in 2u32..7, b in 2u32..7) {
        let lhs = z(&[a]) * z(&[b]);
        let rhs = z(&[a, b]) + z(&[b, a]) + z(&[a + b]);
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn error_bound_respected(parts in prop::collection::vec(1u32..4, 1..4), first in 2u32..5, e in 6i32..25) {
        let mut p = vec![first];
        p.extend(parts);
        let c = Composition::new(p).unwrap();
        let target = 10f64.powi(-e);
        let v = mzv(&c, target).unwrap();
        let fine = mzv(&c, 1e-40).unwrap();
        prop_assert!(v.error_bound <= target);
        prop_assert!(rational_to_f64(&(&v.value - &fine.value)).abs() <= target);
    }
}

#[test]
fn shuffle_for_single_zetas() {
    for s1 in 2..=4u32 {
        for s2 in 2..=4u32 {
            let k = s1 + s2;
            let mut rhs = 0.0;
            for a in 2..k {
                let c = binomial(u64::from(a - 1), u64::from(s1 - 1)) + binomial(u64::from(a - 1), u64::from(s2 - 1));
                rhs += mdsum::exactnum::bigint_to_f64(&c) * z(&[a, k - a]);
            }
            assert!((z(&[s1]) * z(&[s2]) - rhs).abs() < 1e-6, "({s1},{s2})");
        }
    }
}

#[test]
fn proven_relations_map_to_zero() {
    let pool = proven_relation_pool(8, 3, 40).unwrap();
    for r in pool.iter() {
        let v = z_k_symbolic(r.body(), r.weight(), 1e-12).unwrap();
        assert!(v.to_f64().abs() < 1e-6, "{r}: {v}");
    }
}

#[test]
fn modified_zeta_of_twos() {
    for l in 1..=4usize {
        let c = Composition::new(vec![2; l]).unwrap();
        assert_eq!(modified_qzeta(&c, 40).unwrap(), bracket_series(&c, 40));
    }
}
