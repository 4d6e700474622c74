use std::collections::BTreeSet;

use proptest::prelude::*;
use tripcert::admissible::*;
use tripcert::numbers::{bip, NumberTables};

/// Straight re-evaluation of the four conditions.
fn brute_admissible(tb: &NumberTables, n: i64, delta: i64) -> BTreeSet<(i64, i64)> {
    let quota = tb.g3(n) - tb.g3(n - 1) + 1;
    let mut out = BTreeSet::new();
    for s in 1..=n - 2 {
        for t in 1..=n - 2 {
            if 2 * (s + t) < n || (s - t).abs() > delta {
                continue;
            }
            let mut best = None;
            for d1 in 1..=(s + t).min(n - 1) {
                for d2 in 1..=d1 {
                    let rest = n - 1 - d1;
                    let sum = bip(d1) + (rest / d2) * bip(d2) + bip(rest % d2);
                    if sum >= quota {
                        best = Some(best.map_or(d1 + d2, |b: i64| b.min(d1 + d2)));
                    }
                }
            }
            let Some(sm) = best else { continue };
            if 9 * sm <= 8 * n && s * t + bip(n - 1 - s - t) >= quota {
                out.insert((s, t));
            }
        }
    }
    out
}

#[test]
fn n13_matches_recomputation() {
    let tb = NumberTables::new(20);
    let got: BTreeSet<(i64, i64)> = enumerate_admissible(&tb, 13, 4).iter().map(|p| (p.s, p.t)).collect();
    assert_eq!(got, brute_admissible(&tb, 13, 4));
}

#[test]
fn small_caps() {
    let tb = NumberTables::new(20);
    assert_eq!(compute_s_min(&tb, 13, 0), None);
    assert!(compute_s_min(&tb, 13, 12).is_some_and(|v| v <= 12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn matches_recomputation(n in 5i64..60, delta in 0i64..12) {
        let tb = NumberTables::new(60);
        let got: BTreeSet<(i64, i64)> = enumerate_admissible(&tb, n, delta).iter().map(|p| (p.s, p.t)).collect();
        prop_assert_eq!(got, brute_admissible(&tb, n, delta));
    }

    #[test]
    fn symmetric_and_monotone_in_delta(n in 5i64..200, delta in 0i64..20) {
        let tb = NumberTables::new(200);
        let a: BTreeSet<(i64, i64)> = enumerate_admissible(&tb, n, delta).iter().map(|p| (p.s, p.t)).collect();
        let b: BTreeSet<(i64, i64)> = enumerate_admissible(&tb, n, delta + 1).iter().map(|p| (p.s, p.t)).collect();
        for &(s, t) in &a {
            prop_assert!(a.contains(&(t, s)));
        }
        prop_assert!(a.is_subset(&b));
    }
}
