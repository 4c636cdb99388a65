//! Property tests for the algebraic laws the whole artifact leans on.

use proptest::prelude::*;

use sumprod::field::FieldSpec;
use sumprod::matrix::{Matrix, RingSpec};
use sumprod::sets::{additive_energy, count_n6, MatrixSet};

fn spec_strategy() -> impl Strategy<Value = RingSpec> {
    prop_oneof![
        Just((2u64, 1u32, 1usize)),
        Just((2, 1, 2)),
        Just((3, 1, 1)),
        Just((3, 1, 2)),
        Just((2, 2, 1)),
        Just((5, 1, 1)),
        Just((7, 1, 1)),
        Just((2, 3, 1)),
    ]
    .prop_map(|(p, m, n)| RingSpec::new(FieldSpec::new(p, m).unwrap(), n).unwrap())
}

proptest! {
    #[test]
    fn encode_decode_round_trip(spec in spec_strategy(), raw in any::<u64>()) {
        let idx = raw % spec.card();
        let m = spec.decode(idx).unwrap();
        prop_assert_eq!(spec.encode(&m), idx);
    }

    #[test]
    fn index_addition_is_group_law(
        spec in spec_strategy(),
        a in any::<u64>(),
        b in any::<u64>(),
        c in any::<u64>(),
    ) {
        let (a, b, c) = (a % spec.card(), b % spec.card(), c % spec.card());
        prop_assert_eq!(spec.index_add(a, b), spec.index_add(b, a));
        prop_assert_eq!(
            spec.index_add(spec.index_add(a, b), c),
            spec.index_add(a, spec.index_add(b, c))
        );
        prop_assert_eq!(spec.index_add(a, spec.index_neg(a)), 0);
        prop_assert_eq!(spec.index_sub(spec.index_add(a, b), b), a);
    }

    #[test]
    fn matrix_ring_laws(spec in spec_strategy(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = spec.field();
        let ma = spec.decode(a % spec.card()).unwrap();
        let mb = spec.decode(b % spec.card()).unwrap();
        let mc = spec.decode(c % spec.card()).unwrap();
        // distributivity ties + and * together
        prop_assert_eq!(
            ma.mul(&mb.add(&mc, f), f),
            ma.mul(&mb, f).add(&ma.mul(&mc, f), f)
        );
        prop_assert_eq!(
            ma.add(&mb, f).mul(&mc, f),
            ma.mul(&mc, f).add(&mb.mul(&mc, f), f)
        );
        // transpose-free rank sanity: rank bounded by n
        prop_assert!(ma.rank(f) <= spec.n());
    }

    #[test]
    fn det_product_rule(spec in spec_strategy(), a in any::<u64>(), b in any::<u64>()) {
        let f = spec.field();
        let ma = spec.decode(a % spec.card()).unwrap();
        let mb = spec.decode(b % spec.card()).unwrap();
        let (da, _) = ma.det_inv(f);
        let (db, _) = mb.det_inv(f);
        let (dab, _) = ma.mul(&mb, f).det_inv(f);
        prop_assert_eq!(dab, f.mul(da, db));
    }

    #[test]
    fn set_ops_respect_bounds(spec in spec_strategy(), seed in any::<u64>()) {
        let a = MatrixSet::random(&spec, 0.4, seed).unwrap();
        let b = MatrixSet::random(&spec, 0.4, seed.wrapping_add(1)).unwrap();
        let sum = a.sum(&b).unwrap();
        prop_assert!(sum.size() <= spec.card());
        if !a.is_empty() && !b.is_empty() {
            prop_assert!(sum.size() as u128 <= a.size() as u128 * b.size() as u128);
            // sumset contains every translate of a singleton
            let b0 = b.members().next().unwrap();
            for x in a.members().take(8) {
                prop_assert!(sum.contains(spec.index_add(x, b0)));
            }
        }
        let neg = a.negated();
        prop_assert_eq!(neg.size(), a.size());
        prop_assert_eq!(neg.negated(), a);
    }

    #[test]
    fn energy_floor_and_symmetry(spec in spec_strategy(), seed in any::<u64>()) {
        let a = MatrixSet::random(&spec, 0.5, seed).unwrap();
        let b = MatrixSet::random(&spec, 0.5, seed.wrapping_add(9)).unwrap();
        let e = additive_energy(&a, &b).unwrap();
        prop_assert_eq!(e, additive_energy(&b, &a).unwrap());
        // diagonal quadruples a1 = a2, b1 = b2 always solve
        prop_assert!(e >= a.size() as u128 * b.size() as u128);
        // Cauchy-Schwarz floor
        let q = spec.card() as u128;
        let pairs = a.size() as u128 * b.size() as u128;
        prop_assert!(q * e >= pairs * pairs);
    }

    #[test]
    fn n6_swap_symmetry(seed in any::<u64>()) {
        let spec = RingSpec::new(FieldSpec::new(3, 1).unwrap(), 1).unwrap();
        let mk = |k: u64| MatrixSet::random(&spec, 0.5, seed.wrapping_add(k)).unwrap();
        let (a, b, c, d, e, f) = (mk(0), mk(1), mk(2), mk(3), mk(4), mk(5));
        prop_assert_eq!(
            count_n6(&a, &b, &c, &d, &e, &f).unwrap(),
            count_n6(&e, &f, &c, &d, &a, &b).unwrap()
        );
    }

    #[test]
    fn hstack_rank_bounds(spec in spec_strategy(), a in any::<u64>(), b in any::<u64>()) {
        let f = spec.field();
        let ma = spec.decode(a % spec.card()).unwrap();
        let mb = spec.decode(b % spec.card()).unwrap();
        let stacked = Matrix::hstack(&[&ma, &mb]);
        let r = stacked.rank(f);
        prop_assert!(r >= ma.rank(f).max(mb.rank(f)));
        prop_assert!(r <= ma.rank(f) + mb.rank(f));
    }
}
