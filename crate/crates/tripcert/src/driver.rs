//! The Δ/P escalation ladder, range orchestration and JSONL certificates.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::emptiness::{certify_gate_empty, GateCertificate, GateParams, Verdict};
use crate::error::{Error, Result};
use crate::numbers::NumberTables;
use crate::smallcases::{verify_small_case, CaseReport};

/// Vertex counts settled by degree-sequence arithmetic instead.
pub const SMALL_CASES: [i64; 4] = [13, 14, 16, 17];
/// Largest n covered by the computation; larger n are handled analytically.
pub const MAX_N: i64 = 699;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepResult {
    Verified,
    NoDeltaFound,
    PNotDecreasing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EscalationStep {
    pub t: u32,
    /// Certified Δ at this step, absent when none was found.
    pub delta: Option<i64>,
    pub p_prev: i64,
    pub result: StepResult,
    /// Certificate of the certified gate.
    pub certificate: Option<GateCertificate>,
    /// Gates tried and rejected during the descending scan.
    pub rejected: Vec<GateCertificate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Success,
    Failure,
    TrivialDZero,
    TrivialDtildeNegative,
    DelegatedSmallCase,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EscalationTrace {
    pub n: i64,
    pub delta_max: Option<i64>,
    pub steps: Vec<EscalationStep>,
    pub outcome: Outcome,
}

impl EscalationTrace {
    /// P strictly decreases across steps and a success ends at Δ_max.
    pub fn is_valid(&self) -> bool {
        let ps: Vec<i64> = self.steps.iter().map(|s| s.p_prev).collect();
        let decreasing = ps.windows(2).all(|w| w[1] < w[0]);
        let ends = match self.outcome {
            Outcome::Success => self.steps.last().and_then(|s| s.delta) == self.delta_max,
            _ => true,
        };
        decreasing && ends
    }
}

pub fn run_escalation(tables: &NumberTables, n: i64) -> Result<EscalationTrace> {
    if SMALL_CASES.contains(&n) {
        return Err(Error::DelegatedSmallCase(n));
    }
    if n < 3 {
        return Err(Error::Precondition(format!("n = {n} must be at least 3")));
    }
    let d = tables.d(n);
    let dt = tables.d_tilde(n);
    let delta_max = tables.delta_max(n);
    let trace = |steps, outcome| EscalationTrace { n, delta_max, steps, outcome };
    if d == 0 {
        return Ok(trace(vec![], Outcome::TrivialDZero));
    }
    let Some(dmax) = delta_max else {
        return Ok(trace(vec![], Outcome::TrivialDtildeNegative));
    };
    let mut p = 4 * (d - 1);
    let mut prev_delta = -1;
    let mut steps = Vec::new();
    for t in 1.. {
        let mut rejected = Vec::new();
        let mut found = None;
        for delta in (prev_delta + 1..=dmax).rev() {
            let cert = certify_gate_empty(tables, GateParams { n, delta, p });
            if cert.is_empty_verified() {
                found = Some(cert);
                break;
            }
            rejected.push(cert);
        }
        let Some(cert) = found else {
            steps.push(EscalationStep { t, delta: None, p_prev: p, result: StepResult::NoDeltaFound, certificate: None, rejected });
            return Ok(trace(steps, Outcome::Failure));
        };
        let delta = cert.gate.delta;
        steps.push(EscalationStep { t, delta: Some(delta), p_prev: p, result: StepResult::Verified, certificate: Some(cert), rejected });
        if delta == dmax {
            return Ok(trace(steps, Outcome::Success));
        }
        let next = (dt - (delta + 1) * (delta + 1)).div_euclid(2);
        if next >= p {
            steps.last_mut().unwrap().result = StepResult::PNotDecreasing;
            return Ok(trace(steps, Outcome::Failure));
        }
        p = next;
        prev_delta = delta;
    }
    unreachable!()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum NResult {
    Escalation(EscalationTrace),
    SmallCase(CaseReport),
}

impl NResult {
    pub fn n(&self) -> i64 {
        match self {
            NResult::Escalation(t) => t.n,
            NResult::SmallCase(r) => r.n,
        }
    }

    pub fn ok(&self) -> bool {
        match self {
            NResult::Escalation(t) => t.outcome != Outcome::Failure,
            NResult::SmallCase(r) => r.is_established(),
        }
    }

    pub fn method(&self) -> &'static str {
        match self {
            NResult::SmallCase(_) => "small-case",
            NResult::Escalation(t) => match t.outcome {
                Outcome::TrivialDZero => "trivial-d-zero",
                Outcome::TrivialDtildeNegative => "trivial-dtilde-negative",
                _ => "escalation",
            },
        }
    }
}

pub fn verify_n(tables: &NumberTables, n: i64) -> Result<NResult> {
    if SMALL_CASES.contains(&n) {
        Ok(NResult::SmallCase(verify_small_case(n)?))
    } else {
        Ok(NResult::Escalation(run_escalation(tables, n)?))
    }
}

#[derive(Debug, Clone)]
pub struct RangeRun {
    pub results: Vec<NResult>,
    /// Wall time per n in milliseconds, same order as `results`.
    pub millis: Vec<f64>,
    /// Set when `fail_fast` stopped the run early.
    pub stopped_early: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RangeSummary {
    pub total: usize,
    pub certified: usize,
    pub failures: Vec<i64>,
    pub by_method: BTreeMap<&'static str, usize>,
}

impl RangeRun {
    pub fn summary(&self) -> RangeSummary {
        let mut s = RangeSummary { total: self.results.len(), ..Default::default() };
        for r in &self.results {
            *s.by_method.entry(r.method()).or_insert(0) += 1;
            if r.ok() {
                s.certified += 1;
            } else {
                s.failures.push(r.n());
            }
        }
        s
    }
}

/// Verifies every n in `[from, to]` on `jobs` workers; results come back
/// ordered by n whatever the scheduling.
pub fn run_range(from: i64, to: i64, jobs: usize, fail_fast: bool) -> Result<RangeRun> {
    if from < 3 || to > MAX_N || from > to {
        return Err(Error::Precondition(format!(
            "range must satisfy 3 <= from <= to <= {MAX_N} (got {from}..{to}); n >= 700 is covered by the analytic argument"
        )));
    }
    let tables = NumberTables::new(to as usize + 1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(e.to_string()))?;
    let failed = std::sync::atomic::AtomicBool::new(false);
    // large n first so the long jobs start early
    let mut order: Vec<i64> = (from..=to).collect();
    order.reverse();
    let mut out: Vec<(i64, Option<(NResult, f64)>)> = pool.install(|| {
        order
            .par_iter()
            .with_max_len(1)
            .map(|&n| {
                if fail_fast && failed.load(std::sync::atomic::Ordering::Relaxed) {
                    return Ok((n, None));
                }
                let start = Instant::now();
                let r = verify_n(&tables, n)?;
                if !r.ok() {
                    failed.store(true, std::sync::atomic::Ordering::Relaxed);
                }
                Ok((n, Some((r, start.elapsed().as_secs_f64() * 1e3))))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    out.sort_by_key(|(n, _)| *n);
    let stopped_early = out.iter().any(|(_, r)| r.is_none());
    let (results, millis) = out.into_iter().filter_map(|(_, r)| r).unzip();
    Ok(RangeRun { results, millis, stopped_early })
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub t: u32,
    pub delta: i64,
    pub p: i64,
    pub configs: u64,
    pub pruned: BTreeMap<&'static str, u64>,
    pub max_tau_slack: Option<i64>,
}

/// One stable certificate line.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateRecord {
    pub n: i64,
    pub method: &'static str,
    pub ok: bool,
    pub steps: Vec<StepRecord>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TimingRecord {
    pub n: i64,
    pub ms: f64,
}

fn gate_note(c: &GateCertificate) -> String {
    let g = c.gate;
    match &c.verdict {
        Verdict::Failed(f) => format!(
            "rejected gate delta={} p={}: {}",
            g.delta,
            g.p,
            serde_json::to_string(f).expect("serializable")
        ),
        v => format!("gate delta={} p={}: {:?}", g.delta, g.p, v),
    }
}

pub fn certificate_record(r: &NResult) -> CertificateRecord {
    let mut notes = Vec::new();
    let mut steps = Vec::new();
    match r {
        NResult::SmallCase(rep) => {
            for b in &rep.branches {
                notes.push(format!(
                    "{}: {} (lhs {} vs rhs {}) {}",
                    b.name,
                    b.assertion,
                    b.lhs,
                    b.rhs,
                    if b.ok { "closes" } else { "open" }
                ));
            }
            notes.extend(rep.notes.iter().cloned());
        }
        NResult::Escalation(tr) => {
            notes.push(match tr.delta_max {
                Some(d) => format!("delta_max={d}"),
                None => "delta_max absent".to_string(),
            });
            if !tr.steps.is_empty() {
                notes.push("eta = floor(P/2) / min admissible s*t".to_string());
            }
            for s in &tr.steps {
                for rej in &s.rejected {
                    notes.push(format!("t={}: {}", s.t, gate_note(rej)));
                }
                match &s.certificate {
                    Some(c) => steps.push(StepRecord {
                        t: s.t,
                        delta: c.gate.delta,
                        p: c.gate.p,
                        configs: c.stats.configs,
                        pruned: c.stats.pruned.clone(),
                        max_tau_slack: c.stats.max_tau_slack,
                    }),
                    None => notes.push(format!("t={}: no delta certified at p={}", s.t, s.p_prev)),
                }
                if s.result == StepResult::PNotDecreasing {
                    notes.push(format!("t={}: next P not below {}", s.t, s.p_prev));
                }
            }
        }
    }
    CertificateRecord { n: r.n(), method: r.method(), ok: r.ok(), steps, notes }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.display().to_string(), source }
}

/// Sibling path holding the volatile timing records.
pub fn timing_path(path: &Path) -> std::path::PathBuf {
    let mut name = path.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".timing");
    path.with_file_name(name)
}

/// Writes the stable JSONL file and its `.timing` sibling.
pub fn emit_certificates(run: &RangeRun, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).map_err(io_err(path))?);
    for r in &run.results {
        let line = serde_json::to_string(&certificate_record(r)).expect("serializable");
        writeln!(w, "{line}").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))?;
    let tpath = timing_path(path);
    let mut tw = BufWriter::new(File::create(&tpath).map_err(io_err(&tpath))?);
    for (r, ms) in run.results.iter().zip(&run.millis) {
        let line = serde_json::to_string(&TimingRecord { n: r.n(), ms: *ms }).expect("serializable");
        writeln!(tw, "{line}").map_err(io_err(&tpath))?;
    }
    tw.flush().map_err(io_err(&tpath))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_outcomes() {
        let tb = NumberTables::new(40);
        assert_eq!(run_escalation(&tb, 6).unwrap().outcome, Outcome::TrivialDZero);
        assert_eq!(run_escalation(&tb, 27).unwrap().outcome, Outcome::TrivialDZero);
        assert!(run_escalation(&tb, 13).is_err());
    }

    #[test]
    fn escalation_succeeds_for_small_n() {
        let tb = NumberTables::new(40);
        for n in [5, 11, 15, 18, 19, 20, 23, 35] {
            let tr = run_escalation(&tb, n).unwrap();
            assert!(tr.outcome != Outcome::Failure, "n={n}: {tr:?}");
            assert!(tr.is_valid());
        }
    }

    #[test]
    fn range_is_ordered_and_scheduling_independent() {
        let a = run_range(3, 25, 1, false).unwrap();
        let b = run_range(3, 25, 4, false).unwrap();
        let la: Vec<String> = a.results.iter().map(|r| serde_json::to_string(&certificate_record(r)).unwrap()).collect();
        let lb: Vec<String> = b.results.iter().map(|r| serde_json::to_string(&certificate_record(r)).unwrap()).collect();
        assert_eq!(la, lb);
        assert_eq!(a.summary(), b.summary());
        assert!(a.summary().failures.is_empty());
        assert!(run_range(3, 700, 1, false).is_err());
    }
}
