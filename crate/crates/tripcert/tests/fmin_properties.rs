use num_traits::{Signed, Zero};
use proptest::prelude::*;
use tripcert::fmin::*;
use tripcert::Q;

fn rat() -> impl Strategy<Value = Q> {
    (1i128..=80, 1i128..=8).prop_map(|(n, d)| Q::new(n, d))
}

fn f(a: Q, b: Q, c: Q) -> Q {
    f_value(&FQuery::new(a, b, c)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn symmetric(a in rat(), b in rat(), c in rat()) {
        prop_assert_eq!(f(a, b, c), f(b, a, c));
    }

    #[test]
    fn monotone(a in rat(), b in rat(), c in rat(), eps in rat()) {
        let v = f(a, b, c);
        prop_assert!(f(a + eps, b, c) >= v);
        prop_assert!(f(a, b + eps, c) >= v);
        prop_assert!(f(a, b, c + eps) <= v);
    }

    #[test]
    fn scales_quadratically(a in rat(), b in rat(), c in rat(), l in rat()) {
        prop_assert_eq!(f(l * a, l * b, l * c), l * l * f(a, b, c));
    }

    #[test]
    fn ratio_bound(a in rat(), b in rat(), c in rat(), frac in 1i128..=20) {
        let b2 = b * Q::new(frac, 20);
        prop_assert!(b2 / b * f(a, b, c) >= f(a, b2, c));
    }

    #[test]
    fn positive_iff_overfull(a in rat(), b in rat(), c in rat()) {
        prop_assert_eq!(f(a, b, c).is_positive(), a + b > c);
    }

    #[test]
    fn witness_is_feasible_and_optimal(a in rat(), b in rat(), c in rat()) {
        let q = FQuery::new(a, b, c);
        let w = minimizer(&q).unwrap().unwrap();
        prop_assert!(w.is_feasible(&q));
        prop_assert_eq!(w.cross_sum(), f(a, b, c));
    }

    #[test]
    fn nonpositive_side_gives_zero(a in -20i128..=0, b in rat(), c in rat()) {
        prop_assert!(f(Q::from_integer(a), b, c).is_zero());
        prop_assert!(minimizer(&FQuery::new(Q::from_integer(a), b, c)).unwrap().is_none());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn grid_sandwich(cn in 1i128..=24, cd in 1i128..=6, ra in 1i128..=12, rb in 1i128..=12) {
        let c = Q::new(cn, cd);
        let q = FQuery::new(c * Q::new(ra, 6), c * Q::new(rb, 6), c);
        let exact = f_value(&q).unwrap();
        let g = f_grid_oracle(&q, 24).unwrap();
        prop_assert!(exact <= g);
        prop_assert!(g <= exact + q.a * q.b * Q::from_integer(8) / Q::from_integer(24));
    }
}

#[test]
fn no_cap_is_an_error() {
    assert!(f_value(&FQuery::ints(1, 1, 0)).is_err());
    assert!(f_value(&FQuery::ints(1, 1, -2)).is_err());
    assert!(f_grid_oracle(&FQuery::ints(1, 1, 0), 8).is_err());
}
