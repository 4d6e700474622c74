use std::fs;

use tripcert::driver::*;
use tripcert::numbers::NumberTables;

#[test]
fn first_ten_values() {
    let run = run_range(3, 12, 4, false).unwrap();
    let s = run.summary();
    assert_eq!(s.total, 10);
    assert_eq!(s.certified, 10);
}

#[test]
fn exceptional_window() {
    let run = run_range(13, 17, 1, false).unwrap();
    let s = run.summary();
    assert_eq!(s.by_method.get("small-case"), Some(&4));
    assert_eq!(s.by_method.get("escalation"), Some(&1));
    assert!(s.failures.is_empty());
}

#[test]
fn range_bounds() {
    assert!(run_range(2, 10, 1, false).is_err());
    assert!(run_range(600, 700, 1, false).is_err());
    assert!(run_range(20, 10, 1, false).is_err());
}

#[test]
fn traces_are_valid() {
    let tb = NumberTables::new(200);
    for n in (3..=200).filter(|n| !SMALL_CASES.contains(n)) {
        let tr = run_escalation(&tb, n).unwrap();
        assert!(tr.is_valid(), "n={n}");
        assert!(matches!(tr.outcome, Outcome::Success | Outcome::TrivialDZero), "n={n}: {:?}", tr.outcome);
    }
    assert_eq!(run_escalation(&tb, 6).unwrap().outcome, Outcome::TrivialDZero);
    assert_eq!(run_escalation(&tb, 27).unwrap().outcome, Outcome::TrivialDZero);
    // 18 = 27 - 9, so the blowup already meets the cyclic maximum
    assert_eq!(run_escalation(&tb, 18).unwrap().outcome, Outcome::TrivialDZero);
    assert_eq!(run_escalation(&tb, 20).unwrap().outcome, Outcome::Success);
    assert!(run_escalation(&tb, 13).is_err());
}

#[test]
fn certificates_are_stable_across_job_counts() {
    let dir = std::env::temp_dir().join(format!("tripcert-pipeline-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.jsonl");
    let b = dir.join("b.jsonl");
    let run1 = run_range(3, 90, 1, false).unwrap();
    let run8 = run_range(3, 90, 8, false).unwrap();
    assert_eq!(run1.summary(), run8.summary());
    emit_certificates(&run1, &a).unwrap();
    emit_certificates(&run8, &b).unwrap();
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert_eq!(text.lines().count(), 88);
    let six: serde_json::Value = serde_json::from_str(text.lines().nth(3).unwrap()).unwrap();
    assert_eq!(six["n"], 6);
    assert_eq!(six["method"], "trivial-d-zero");
    assert_eq!(six["ok"], true);
    let thirteen: serde_json::Value = serde_json::from_str(text.lines().nth(10).unwrap()).unwrap();
    assert_eq!(thirteen["method"], "small-case");
    assert!(thirteen["notes"].as_array().unwrap().iter().any(|s| s.as_str().unwrap().contains("closes")));
    assert_eq!(fs::read_to_string(timing_path(&a)).unwrap().lines().count(), 88);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unwritable_path_reports_it() {
    let run = run_range(3, 5, 1, false).unwrap();
    let err = emit_certificates(&run, std::path::Path::new("/nonexistent-dir/x.jsonl")).unwrap_err();
    assert!(err.to_string().contains("/nonexistent-dir/x.jsonl"));
}
