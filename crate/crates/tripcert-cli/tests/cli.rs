use std::process::{Command, Output};

fn tripcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tripcert")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn tables_print_g3() {
    let o = tripcert(&["tables", "--fn", "g3", "--max", "13"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "12 70"));
    assert!(text.lines().any(|l| l == "13 88"));
}

#[test]
fn tables_dtilde() {
    let o = tripcert(&["tables", "--fn", "dtilde", "--max", "13"]);
    assert!(stdout(&o).lines().any(|l| l == "13 16"));
}

#[test]
fn verify_small_range_writes_certificates() {
    let dir = std::env::temp_dir().join(format!("tripcert-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("c.jsonl");
    let o = tripcert(&["verify", "--from", "3", "--to", "25", "--jobs", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["summary"]["certified"], 23);
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 23);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn refuses_beyond_699() {
    let o = tripcert(&["verify", "--from", "690", "--to", "700"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("analytic"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(tripcert(&["tables", "--fn", "nope", "--max", "3"]).status.code(), Some(2));
    assert_eq!(tripcert(&["smallcase", "--n", "15"]).status.code(), Some(2));
    assert_eq!(tripcert(&["brute", "--n", "7"]).status.code(), Some(2));
    assert_eq!(tripcert(&[]).status.code(), Some(2));
}

#[test]
fn smallcase_reports_contradiction() {
    let o = tripcert(&["smallcase", "--n", "14"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "contradiction-established");
    assert_eq!(v["branches"][0]["lhs"], 178);
}

#[test]
fn oracle_commands() {
    let o = tripcert(&["brute", "--n", "5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"max_monochromatic\": 4"));
    assert!(tripcert(&["props", "--trials", "50", "--seed", "3"]).status.success());
    assert!(tripcert(&["fcheck", "--trials", "20", "--resolution", "12", "--seed", "1"]).status.success());
    assert!(tripcert(&["highk", "--kmax", "20"]).status.success());
}
