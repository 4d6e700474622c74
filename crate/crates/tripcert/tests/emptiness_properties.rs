use proptest::prelude::*;
use tripcert::driver::run_escalation;
use tripcert::emptiness::*;
use tripcert::numbers::NumberTables;

fn certified_gates(tb: &NumberTables, ns: &[i64]) -> Vec<GateParams> {
    let mut out = Vec::new();
    for &n in ns {
        let tr = run_escalation(tb, n).unwrap();
        for s in tr.steps {
            if let Some(c) = s.certificate {
                out.push(c.gate);
            }
        }
    }
    out
}

#[test]
fn smaller_budgets_stay_empty() {
    let tb = NumberTables::new(120);
    let gates = certified_gates(&tb, &[18, 20, 23, 31, 44, 58, 77, 100]);
    assert!(!gates.is_empty());
    for g in gates {
        for delta in [0, g.delta / 2, g.delta] {
            for p in [0, g.p / 3, g.p - 1, g.p] {
                let c = certify_gate_empty(&tb, GateParams { n: g.n, delta, p });
                assert!(c.is_empty_verified(), "{g:?} -> delta={delta} p={p}: {:?}", c.verdict);
            }
        }
    }
}

#[test]
fn negative_budget_is_trivial() {
    let tb = NumberTables::new(50);
    let c = certify_gate_empty(&tb, GateParams { n: 40, delta: 3, p: -1 });
    assert_eq!(c.verdict, Verdict::EmptyTrivialPNegative);
}

#[test]
fn audited_one_percent_sample() {
    let tb = NumberTables::new(400);
    for g in certified_gates(&tb, &[35, 68, 71, 150, 301]) {
        let c = certify_gate_empty_with(&tb, g, CertifyOptions { audit_stride: Some(100) });
        assert!(c.is_empty_verified(), "{g:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certificates_are_deterministic(n in 18i64..120, dfrac in 0i64..=4, pfrac in 0i64..=4) {
        let tb = NumberTables::new(120);
        let dm = tb.delta_max(n).unwrap_or(0);
        let gate = GateParams { n, delta: dm * dfrac / 4, p: (tb.d(n) * 4 - 4).max(0) * pfrac / 4 };
        let a = certify_gate_empty(&tb, gate);
        let b = certify_gate_empty(&tb, gate);
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn minimal_w_matches_scan(n in 10i64..200, s in 1i64..60, t in 1i64..60, k in 0i64..40) {
        let tb = NumberTables::new(200);
        let dt = tb.d_tilde(n);
        prop_assert_eq!(minimal_w(n, dt, s, t, k), minimal_w_scan(n, dt, s, t, k));
    }
}
