use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ybhom::homology::{chain_slice, check_wall, ChainComplex, VModuleSpec};
use ybhom::scalar::{IntPoly, RatFunc};
use ybhom::tensor::{rank_both, rank_exact, LinMap, SparseVec, Subspace};
use ybhom::ybop::YBData;

fn poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-6i64..=6, 0..4).prop_map(|cs| IntPoly::from_i64s(&cs))
}

fn nonzero_poly() -> impl Strategy<Value = IntPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

fn sparse_ratfunc() -> impl Strategy<Value = RatFunc> {
    prop_oneof![3 => Just(RatFunc::zero()), 2 => ratfunc()]
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = LinMap> {
    prop::collection::vec(sparse_ratfunc(), rows * cols).prop_map(move |v| {
        let dense: Vec<Vec<RatFunc>> = v.chunks(cols).map(<[RatFunc]>::to_vec).collect();
        LinMap::from_dense(&dense).unwrap()
    })
}

fn int_matrix(l: usize) -> impl Strategy<Value = LinMap> {
    prop::collection::vec(-2i64..=2, l * l).prop_map(move |v| {
        let dense: Vec<Vec<RatFunc>> = v.chunks(l).map(|r| r.iter().map(|&x| RatFunc::from_int(x)).collect()).collect();
        LinMap::from_dense(&dense).unwrap()
    })
}

/// `c0 + c1 B + c2 B^2`, which all commute for a fixed `B`.
fn poly_in(b: &LinMap, c: (i64, i64, i64)) -> LinMap {
    let b2 = b.compose(b).unwrap();
    LinMap::scalar(b.rows(), &RatFunc::from_int(c.0))
        .add_scaled(&RatFunc::from_int(c.1), b)
        .unwrap()
        .add_scaled(&RatFunc::from_int(c.2), &b2)
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &RatFunc::zero(), a.clone());
        prop_assert_eq!(&a * &RatFunc::one(), a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn canonical_form(n in poly(), d in nonzero_poly(), k in 1i64..5) {
        let r = RatFunc::new(n.clone(), d.clone()).unwrap();
        let scaled = RatFunc::new(n.scale(&BigInt::from(-k)), d.scale(&BigInt::from(-k))).unwrap();
        prop_assert_eq!(&r, &scaled);
        let g = r.numer().gcd(r.denom());
        prop_assert!(g.is_constant());
        prop_assert!(r.denom().leading().unwrap() > &BigInt::from(0));
        prop_assert_eq!(RatFunc::parse(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in ratfunc(), b in ratfunc(), p in 5i64..40) {
        let at = BigRational::from_integer(BigInt::from(p));
        if let (Ok(x), Ok(y)) = (a.eval_at(&at), b.eval_at(&at)) {
            prop_assert_eq!((&a * &b).eval_at(&at).unwrap(), &x * &y);
            prop_assert_eq!((&a + &b).eval_at(&at).unwrap(), &x + &y);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn place_composes(m in 1usize..=3, a in 0usize..2, b in 0usize..2, c in 0usize..2, d in 0usize..2) {
        let yb = YBData::new(m).unwrap();
        let r = yb.r();
        let twice = LinMap::place(&LinMap::place(r, m, a, b), m, c, d);
        prop_assert_eq!(twice, LinMap::place(r, m, a + c, b + d));
    }

    #[test]
    fn kron_mixed_product(a in matrix(2, 2), b in matrix(2, 3), c in matrix(2, 2), d in matrix(3, 2)) {
        let lhs = a.kron(&b).compose(&c.kron(&d)).unwrap();
        let rhs = a.compose(&c).unwrap().kron(&b.compose(&d).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rank_nullity(f in matrix(4, 5)) {
        let r = rank_exact(&f);
        prop_assert_eq!(r + Subspace::kernel(&f).dim(), f.cols());
        prop_assert_eq!(Subspace::image(&f).dim(), r);
        prop_assert_eq!(rank_exact(&f.transpose()), r);
        let (exact, ev) = rank_both(&f).unwrap();
        prop_assert_eq!(exact, r);
        prop_assert_eq!(ev.rank, r);
    }

    #[test]
    fn kernel_vectors_are_killed(f in matrix(3, 5)) {
        for v in Subspace::kernel(&f).basis() {
            prop_assert!(f.apply(v).unwrap().is_zero());
        }
    }

    #[test]
    fn sparse_tensor_matches_kron(u in matrix(3, 1), v in matrix(2, 1)) {
        let t = u.column(0).tensor(&v.column(0));
        prop_assert_eq!(t, u.kron(&v).column(0));
        prop_assert_eq!(SparseVec::zero(3).tensor(&v.column(0)).dim(), 6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn boundary_squares_to_zero(
        b in int_matrix(2),
        c1 in (-2i64..=2, -2i64..=2, -2i64..=2),
        c2 in (-2i64..=2, -2i64..=2, -2i64..=2),
    ) {
        let yb = YBData::new(2).unwrap();
        let spec = VModuleSpec::finite(2, vec![poly_in(&b, c1), poly_in(&b, c2)]).unwrap();
        let cx = ChainComplex::new(&spec, &yb).unwrap();
        for n in 1..=3 {
            prop_assert!(chain_slice(&cx, n, 0).unwrap().squares_to_zero().unwrap());
        }
    }

    #[test]
    fn wall_iff_commuting(a1 in int_matrix(2), a2 in int_matrix(2)) {
        let yb = YBData::new(2).unwrap();
        let commute = a1.compose(&a2).unwrap() == a2.compose(&a1).unwrap();
        let spec = VModuleSpec::finite(2, vec![a1, a2]).unwrap();
        let rep = check_wall(&spec, &yb).unwrap();
        prop_assert!(rep.agree());
        prop_assert_eq!(rep.wall_ok, commute);
    }
}
