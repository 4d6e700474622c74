use proptest::prelude::*;
use tripcert::numbers::*;

#[test]
fn recursion_matches_definition_to_1e5() {
    let tb = NumberTables::new(100_000);
    let mut rec = DRecursion::new();
    for n in 1..=100_000i64 {
        let d = rec.value(n);
        assert_eq!(d, tb.t(n) - tb.g3(n), "n={n}");
        assert!(d >= 0);
        assert_eq!(d == 0, is_nice(n), "n={n}");
    }
}

#[test]
fn balanced_matches_full_search() {
    let mut full = GFullMax::new(3, GFullMax::DEFAULT_CUTOFF);
    for n in 3..=40u64 {
        assert_eq!(full.value(n).unwrap(), g_k(3, n), "n={n}");
    }
    assert!(full.value(61).is_err());
}

#[test]
fn product_form_below_threshold() {
    for k in 3..=8u32 {
        for n in k as u64..=(k * (k - 1)) as u64 {
            assert_eq!(g_k(k, n), balanced_product(k, n), "k={k} n={n}");
        }
    }
}

#[test]
fn consecutive_difference_is_balanced_product() {
    // the gain from one extra vertex equals a balanced (k-1)-partite count
    for k in 3..=8u32 {
        for n in (k as u64 + 1)..=(k * (k - 1)) as u64 {
            let drop = n.div_ceil(k as u64);
            assert_eq!(g_k(k, n) - g_k(k, n - 1), balanced_product(k - 1, n - drop), "k={k} n={n}");
        }
    }
}

#[test]
fn log_bound_range() {
    let tb = NumberTables::new(600);
    for n in 200..600i64 {
        assert!(d_within_log_bound(n as u64, tb.d(n)), "n={n}");
    }
}

fn log2_upper_f64(n: u64) -> f64 {
    log2_upper(n) as f64 / (1u64 << LOG2_FRAC_BITS) as f64
}

proptest! {
    #[test]
    fn log2_is_an_upper_bound(n in 1u64..10_000_000) {
        let l = log2_upper_f64(n);
        prop_assert!(l >= (n as f64).log2() - 1e-12);
        prop_assert!(l - (n as f64).log2() < 1e-9);
    }

    #[test]
    fn g3_is_superadditive_step(n in 4u64..5000) {
        prop_assert!(g_k(3, n) >= g_k(3, n - 1));
        prop_assert!(g_k(3, n) as i64 <= t_tri(n as i64));
    }

    #[test]
    fn t_formula_is_integral(n in 1i64..100_000) {
        let num = if n % 2 == 1 { n * (n * n - 1) } else { n * (n * n - 4) };
        prop_assert_eq!(num % 24, 0);
        prop_assert_eq!(t_tri(n), num / 24);
    }

    #[test]
    fn delta_max_is_floor_sqrt(n in 3i64..2000) {
        let dt = d_tilde(n);
        match delta_max(n) {
            None => prop_assert!(dt < 0),
            Some(m) => prop_assert!(m * m <= dt && (m + 1) * (m + 1) > dt),
        }
    }
}
