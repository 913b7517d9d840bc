use num_traits::Zero;
use proptest::prelude::*;
use tfr_exact::{poly_gcd, rf_rank, rf_solve_linear, Monomial, MultiPoly, QMatrix, RatFun, RFMatrix, Rational};

const NV: usize = 2;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u32..=2, 0u32..=2), small_rational()), 0..4).prop_map(|terms| {
        MultiPoly::from_terms(NV, terms.into_iter().map(|((a, b), c)| (Monomial::from_exponents(&[a, b]), c)))
    })
}

fn nonzero_poly() -> impl Strategy<Value = MultiPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfun() -> impl Strategy<Value = RatFun> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| RatFun::new(n, d).unwrap())
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((1i64..=9, 1i64..=5).prop_map(|(p, q)| Rational::new(p.into(), q.into())), NV)
}

fn assert_canonical(f: &RatFun) {
    assert!(poly_gcd(f.numer(), f.denom()).is_one());
    assert_eq!(f.denom().primitive(), *f.denom());
    if f.is_zero() {
        assert!(f.denom().is_one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in ratfun(), b in ratfun(), x in point()) {
        let (Some(ea), Some(eb)) = (a.eval(&x), b.eval(&x)) else { return Ok(()) };
        prop_assert_eq!((&a + &b).eval(&x), Some(&ea + &eb));
        prop_assert_eq!((&a * &b).eval(&x), Some(&ea * &eb));
        prop_assert_eq!((&a - &b).eval(&x), Some(&ea - &eb));
    }

    #[test]
    fn results_stay_canonical(a in ratfun(), b in ratfun()) {
        assert_canonical(&a);
        assert_canonical(&(&a + &b));
        assert_canonical(&(&a * &b));
        assert_canonical(&(&a - &a));
        if !b.is_zero() {
            let q = &a / &b;
            assert_canonical(&q);
            prop_assert_eq!(&q * &b, a);
        }
    }

    #[test]
    fn gcd_divides_both(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let g = poly_gcd(&(&a * &c), &(&b * &c));
        prop_assert!((&a * &c).div_exact(&g).is_some());
        prop_assert!((&b * &c).div_exact(&g).is_some());
        prop_assert!(g.div_exact(&c.primitive()).is_some());
    }

    #[test]
    fn symbolic_solve_residual_vanishes(entries in prop::collection::vec(ratfun(), 9), rhs in prop::collection::vec(ratfun(), 3)) {
        let a = RFMatrix::from_rows(entries.chunks(3).map(|r| r.to_vec()).collect(), 3, RatFun::zero(NV));
        let b = RFMatrix::column(rhs, RatFun::zero(NV));
        if rf_rank(&a) < 3 {
            prop_assert!(rf_solve_linear(&a, &b).is_err());
            return Ok(());
        }
        let x = rf_solve_linear(&a, &b).unwrap();
        prop_assert!(a.mul(&x).unwrap().sub(&b).unwrap().is_zero());
    }

    #[test]
    fn rank_is_invariant_under_row_operations(entries in prop::collection::vec(-3i64..=3, 12), k in -3i64..=3) {
        let rows: Vec<Vec<i64>> = entries.chunks(4).map(|r| r.to_vec()).collect();
        let a = QMatrix::from_i64_rows(&rows, 4);
        let mut b = a.clone();
        for j in 0..4 {
            let t = &b[(1, j)] + &(&a[(0, j)] * Rational::from_integer(k.into()));
            b[(1, j)] = t;
        }
        b.swap_rows(0, 2);
        prop_assert_eq!(a.rank(), b.rank());
        let ns = a.nullspace();
        prop_assert_eq!(ns.nrows() + a.rank(), 4);
        prop_assert!(a.mul(&ns.transpose()).unwrap().entries().all(Zero::is_zero));
    }
}
