use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use kkv_core::algebra::{GradedSeries, Polynomial, RationalFunction, Series, SymLaurentPoly, Var};
use kkv_core::bps::{bps_from_gw, default_u_order, gw_from_bps, BpsTable};
use kkv_core::kkv::{lambda_decompose, lambda_recompose, KkvBpsGrid};
use kkv_core::nl::{combine, invert_correspondence, ClassLabel, FibreClass, NlMatrix, SyntheticFibration};
use kkv_core::pairs::{multiple_cover, substitute_q_minus_exp, HodgeLabel};
use kkv_core::Error;

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn u_series(min_degree: i64) -> impl Strategy<Value = Series<BigRational>> {
    prop::collection::vec(rational(), 1..6).prop_map(move |c| Series::with_truncation(Var::U, min_degree, c, 6))
}

fn polynomial(max_len: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(rational(), 1..max_len).prop_map(Polynomial::new)
}

fn ratfn() -> impl Strategy<Value = RationalFunction> {
    (polynomial(4), 0u32..3, -1i64..=1).prop_map(|(num, k, shift)| {
        let den = Polynomial::from_ints(&[1, 1]).pow(k);
        RationalFunction::new(num, den)
            .unwrap()
            .mul(&RationalFunction::monomial(BigRational::from_integer(1.into()), shift))
    })
}

fn grid(h_max: usize) -> impl Strategy<Value = KkvBpsGrid> {
    let columns: Vec<_> = (0..=h_max).map(|h| prop::collection::vec(-40i64..=40, 0..=(h + 1).min(4))).collect();
    columns.prop_map(|cols| {
        KkvBpsGrid::from_columns(cols.into_iter().map(|c| c.into_iter().map(BigInt::from).collect()).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn series_product_is_associative_and_commutative(a in u_series(-1), b in u_series(0), c in u_series(1)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(&ab, &b.mul(&a).unwrap());
        prop_assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn series_inverse(a in u_series(-2)) {
        prop_assume!(!a.is_zero());
        let one = a.mul(&a.inv().unwrap()).unwrap();
        let t = one.truncation();
        prop_assert_eq!(one, Series::one(Var::U, t));
    }

    #[test]
    fn series_exp_log(a in u_series(1)) {
        prop_assert_eq!(a.exp().unwrap().log().unwrap(), a);
    }

    #[test]
    fn expansion_is_additive(a in ratfn(), b in ratfn()) {
        let lhs = a.add(&b).expand(8);
        let rhs = a.expand(8).add(&b.expand(8)).unwrap();
        prop_assert_eq!(lhs.first_mismatch(&rhs, 8).unwrap(), None);
    }

    #[test]
    fn ratfn_field_operations(a in ratfn(), b in ratfn(), x in rational()) {
        prop_assume!(!b.is_zero());
        let q = a.div(&b).unwrap();
        prop_assert!(q.mul(&b).cross_eq(&a));
        if let (Some(av), Some(bv), Some(pv)) = (a.eval(&x), b.eval(&x), a.mul(&b).eval(&x)) {
            prop_assert_eq!(pv, av * bv);
        }
        prop_assert_eq!(a.invert_q().invert_q(), a);
    }

    #[test]
    fn graded_exp_log(entries in prop::collection::btree_map(1usize..=4, ratfn(), 0..4)) {
        let a = GradedSeries::connected(4, entries).unwrap();
        prop_assert_eq!(a.exp().unwrap().log().unwrap(), a);
    }

    #[test]
    fn gv_transform_roundtrip(entries in prop::collection::btree_map((0u32..=3, 1u32..=4), nonzero_rational(), 0..8)) {
        let mut table = BpsTable::new();
        for ((g, d), v) in entries {
            table.insert(g, d, v);
        }
        let pot = gw_from_bps(&table, 4, default_u_order(3)).unwrap();
        prop_assert_eq!(bps_from_gw(&pot, 4).unwrap(), table);
    }

    #[test]
    fn lambda_roundtrip(half in prop::collection::vec(rational(), 1..8)) {
        let p = SymLaurentPoly::from_half(half);
        prop_assert_eq!(lambda_recompose(&lambda_decompose(&p)), p);
    }

    #[test]
    fn lambda_decomposition_is_triangular(half in prop::collection::vec(rational(), 1..8)) {
        let p = SymLaurentPoly::from_half(half);
        let c = lambda_decompose(&p);
        prop_assert_eq!(c.len(), p.degree() + 1);
        prop_assert_eq!(c.last().unwrap(), &p.coeff(p.degree() as i64));
    }

    #[test]
    fn pairs_functions_are_symmetric(g in grid(65), d in 1u32..=4, h in -1i64..=5) {
        let label = HodgeLabel::new(d, h).unwrap();
        let f = multiple_cover(label, &g).unwrap();
        prop_assert!(f.is_q_inversion_symmetric());
        let s = substitute_q_minus_exp(&f, 4).unwrap();
        prop_assert!(s.terms().all(|(k, _)| k % 2 == 0));
    }

    #[test]
    fn asymmetric_terms_are_rejected(c in nonzero_rational(), n in 1i64..=4) {
        let f = RationalFunction::monomial(c, n);
        let err = substitute_q_minus_exp(&f, 6).unwrap_err();
        let is_expected = matches!(err, Error::ImaginaryCoefficient { .. } | Error::OddCoefficient { .. });
        prop_assert!(is_expected);
    }

    #[test]
    fn nl_combine_invert_roundtrip(
        values in prop::collection::vec(u_series(-2), 1..5),
        seed in any::<u64>(),
    ) {
        use rand::SeedableRng;
        let labels: Vec<ClassLabel> = (0..values.len() as i64).map(|h| ClassLabel::new(1, h).unwrap()).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let nl = NlMatrix::random_invertible(&labels, &mut rng).unwrap();
        let k3 = kkv_core::nl::InvariantVector::new(labels, values).unwrap();
        prop_assert_eq!(invert_correspondence(&combine(&k3, &nl).unwrap(), &nl).unwrap(), k3);
    }

    #[test]
    fn nl_transfer_detects_faults(seed in any::<u64>(), beta in 0u32..3, c in nonzero_rational(), n in -3i64..=3) {
        use rand::SeedableRng;
        let labels = [ClassLabel::new(1, 0).unwrap(), ClassLabel::new(1, 1).unwrap(), ClassLabel::new(2, 1).unwrap()];
        let g = KkvBpsGrid::from_columns(vec![
            vec![BigInt::from(1)],
            vec![BigInt::from(24), BigInt::from(-2)],
        ]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let nl = NlMatrix::random_unitriangular(&labels, &mut rng).unwrap();
        let mut fib = SyntheticFibration::build(nl, &g, 4).unwrap();
        prop_assert!(fib.transfer(4).unwrap().passed());
        fib.inject_pairs_fault(FibreClass(beta), c, n).unwrap();
        prop_assert!(!fib.transfer(4).unwrap().passed());
    }
}
