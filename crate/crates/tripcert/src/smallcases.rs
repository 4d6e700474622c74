//! Degree-sequence arithmetic ruling out n ∈ {13, 14, 16, 17}.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numbers::{bip, NumberTables};

/// Color-class sizes around one vertex, largest first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DegreeSequence(pub Vec<i64>);

impl DegreeSequence {
    pub fn d1(&self) -> i64 {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn d2(&self) -> i64 {
        self.0.get(1).copied().unwrap_or(0)
    }

    pub fn top_two(&self) -> i64 {
        self.d1() + self.d2()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchResult {
    pub name: String,
    pub assertion: String,
    pub lhs: i64,
    pub rhs: i64,
    pub ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseVerdict {
    ContradictionEstablished,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub n: i64,
    pub feasible_sequences: Vec<DegreeSequence>,
    pub branches: Vec<BranchResult>,
    pub verdict: CaseVerdict,
    pub notes: Vec<String>,
}

impl CaseReport {
    pub fn is_established(&self) -> bool {
        self.verdict == CaseVerdict::ContradictionEstablished
    }
}

fn partitions(rest: i64, max_part: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if rest == 0 {
        out.push(cur.clone());
        return;
    }
    for p in (1..=rest.min(max_part)).rev() {
        cur.push(p);
        partitions(rest - p, p, cur, out);
        cur.pop();
    }
}

/// Sequences summing to `n - 1` with at most one 1 that meet the triangle quota.
pub fn feasible_degree_sequences(n: i64) -> Result<Vec<DegreeSequence>> {
    if !(4..=30).contains(&n) {
        return Err(Error::Precondition(format!("feasible sequences need 4 <= n <= 30, got {n}")));
    }
    let tables = NumberTables::new(n as usize);
    let quota = tables.quota(n);
    let mut all = Vec::new();
    partitions(n - 1, n - 1, &mut Vec::new(), &mut all);
    let mut out: Vec<DegreeSequence> = all
        .into_iter()
        .filter(|p| p.iter().filter(|&&x| x == 1).count() <= 1)
        .filter(|p| p.iter().map(|&x| bip(x)).sum::<i64>() >= quota)
        .map(DegreeSequence)
        .collect();
    out.sort();
    Ok(out)
}

/// Distinct `(d1, d1 + d2)` pairs of the feasible sequences.
fn types(seqs: &[DegreeSequence]) -> Vec<(i64, i64)> {
    let mut t: Vec<(i64, i64)> = seqs.iter().map(|s| (s.d1(), s.top_two())).collect();
    t.sort();
    t.dedup();
    t
}

fn count_search(types: &[(i64, i64)], idx: usize, left: i64, cap: i64, acc: i64, best: &mut Option<i64>) {
    if left == 0 {
        *best = Some(best.map_or(acc, |b| b.min(acc)));
        return;
    }
    if idx == types.len() {
        return;
    }
    let (d1, w) = types[idx];
    for c in (0..=left).rev() {
        if c * d1 > cap {
            continue;
        }
        count_search(types, idx + 1, left - c, cap - c * d1, acc + c * w, best);
    }
}

/// Minimum of `Σ (d1 + d2)` over `n` feasible sequences with `Σ d1 <= d1_cap`.
pub fn counting_contradiction(n: i64, d1_cap: i64) -> Result<Option<i64>> {
    let seqs = feasible_degree_sequences(n)?;
    if seqs.is_empty() {
        return Err(Error::Precondition(format!("no feasible sequences for n = {n}")));
    }
    let mut best = None;
    count_search(&types(&seqs), 0, n, d1_cap, 0, &mut best);
    Ok(best)
}

pub fn d1_cap(n: i64) -> i64 {
    2 * n * n / 3
}

/// Cap when the primary colors are not all equal.
pub fn d1_cap_mixed(n: i64) -> i64 {
    (2 * n * n - (n - 1)).div_euclid(3)
}

pub fn top_two_cap(n: i64) -> i64 {
    8 * n * n / 9
}

/// Fewest vertices forced to the smallest primary degree by a cap on `Σ d1`.
fn forced_min_count(n: i64, dmin: i64, cap: i64) -> i64 {
    (n * (dmin + 1) - cap).max(0)
}

fn counting_branch(n: i64, name: &str, cap: i64, cap_label: &str) -> Result<BranchResult> {
    let rhs = top_two_cap(n);
    let found = counting_contradiction(n, cap)?;
    Ok(match found {
        Some(lhs) => BranchResult {
            name: name.into(),
            assertion: format!("sum d1 <= {cap} ({cap_label}) forces sum (d1+d2) >= {lhs} > {rhs}"),
            lhs,
            rhs,
            ok: lhs > rhs,
        },
        None => BranchResult {
            name: name.into(),
            assertion: format!("no multiset of feasible sequences has sum d1 <= {cap}"),
            lhs: i64::MAX,
            rhs,
            ok: true,
        },
    })
}

/// Case where every vertex has the same primary color, by part sizes of
/// that color's tripartition.
pub fn same_primary_branch(n: i64) -> Result<Vec<BranchResult>> {
    if n != 13 && n != 16 {
        return Err(Error::Precondition(format!("same-primary branch defined for n in {{13, 16}}, got {n}")));
    }
    let seqs = feasible_degree_sequences(n)?;
    let dmin = seqs.iter().map(|s| s.d1()).min().expect("nonempty");
    let pmax = n - dmin;
    let rhs = top_two_cap(n);
    let mut out = Vec::new();
    for a in (0..=pmax).rev() {
        for b in (0..=a).rev() {
            let c = n - a - b;
            if c < 0 || c > b {
                continue;
            }
            let parts = [a, b, c];
            let name = format!("same-primary ({a},{b},{c})");
            let forced: Vec<i64> = parts.iter().copied().filter(|&p| p == pmax).collect();
            if forced.len() >= 2 {
                // two complete parts make the whole tripartition complete
                let mut lhs = 0i64;
                let mut closed_outright = false;
                for &p in &parts {
                    let d1 = n - p;
                    match seqs.iter().filter(|s| s.d1() == d1).map(|s| s.d2()).min() {
                        Some(d2) => lhs += p * (d1 + d2),
                        None if p > 0 => closed_outright = true,
                        None => {}
                    }
                }
                out.push(if closed_outright {
                    BranchResult {
                        name,
                        assertion: "complete tripartition forces a primary degree no feasible sequence has".into(),
                        lhs: i64::MAX,
                        rhs,
                        ok: true,
                    }
                } else {
                    BranchResult {
                        name,
                        assertion: format!("complete tripartition forces sum (d1+d2) >= {lhs} > {rhs}"),
                        lhs,
                        rhs,
                        ok: lhs > rhs,
                    }
                });
                continue;
            }
            if let Some(&p) = forced.first() {
                let d1 = n - p;
                let shapes: Vec<&DegreeSequence> = seqs.iter().filter(|s| s.d1() == d1).collect();
                let only_pairs = !shapes.is_empty() && shapes.iter().all(|s| s.0.len() == 2 && s.d2() == p - 1);
                if only_pairs && p >= 4 {
                    out.push(BranchResult {
                        name,
                        assertion: format!("part of size {p} is a monochromatic K_{p} in a secondary color"),
                        lhs: p,
                        rhs: 3,
                        ok: true,
                    });
                    continue;
                }
            }
            out.push(BranchResult {
                name,
                assertion: "no justified contradiction".into(),
                lhs: 0,
                rhs,
                ok: false,
            });
        }
    }
    Ok(out)
}

pub fn verify_small_case(n: i64) -> Result<CaseReport> {
    if ![13, 14, 16, 17].contains(&n) {
        return Err(Error::NotSmallCase(n));
    }
    let seqs = feasible_degree_sequences(n)?;
    let dmin = seqs.iter().map(|s| s.d1()).min().expect("nonempty");
    let mut notes = vec![format!(
        "sum d1 <= {} forces at least {} vertices with d1 = {dmin}",
        d1_cap(n),
        forced_min_count(n, dmin, d1_cap(n))
    )];
    let mut branches = Vec::new();
    if n == 14 || n == 17 {
        branches.push(counting_branch(n, "counting", d1_cap(n), "floor(2n^2/3)")?);
    } else {
        branches.extend(same_primary_branch(n)?);
        notes.push(format!(
            "sum d1 <= {} forces at least {} vertices with d1 = {dmin}",
            d1_cap_mixed(n),
            forced_min_count(n, dmin, d1_cap_mixed(n))
        ));
        branches.push(counting_branch(n, "mixed-primary", d1_cap_mixed(n), "floor(2n^2/3 - (n-1)/3)")?);
    }
    let verdict = if branches.iter().all(|b| b.ok) {
        CaseVerdict::ContradictionEstablished
    } else {
        CaseVerdict::Failed
    };
    Ok(CaseReport { n, feasible_sequences: seqs, branches, verdict, notes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seqs(v: &[&[i64]]) -> Vec<DegreeSequence> {
        let mut out: Vec<DegreeSequence> = v.iter().map(|s| DegreeSequence(s.to_vec())).collect();
        out.sort();
        out
    }

    #[test]
    fn printed_lists() {
        assert_eq!(
            feasible_degree_sequences(13).unwrap(),
            seqs(&[&[8, 4], &[9, 3], &[9, 2, 1], &[10, 2], &[11, 1], &[12]])
        );
        assert_eq!(
            feasible_degree_sequences(14).unwrap(),
            seqs(&[&[9, 4], &[10, 3], &[10, 2, 1], &[11, 2], &[12, 1], &[13]])
        );
    }

    /// Dynamic program over (vertices used, Σ d1).
    fn dp_min(n: i64, cap: i64) -> Option<i64> {
        let t = types(&feasible_degree_sequences(n).unwrap());
        let mut dp: Vec<Option<i64>> = vec![None; cap as usize + 1];
        dp[0] = Some(0);
        for _ in 0..n {
            let mut nd = vec![None; cap as usize + 1];
            for (s, v) in dp.iter().enumerate() {
                let Some(v) = v else { continue };
                for &(d1, w) in &t {
                    let ns = s as i64 + d1;
                    if ns <= cap {
                        let slot = &mut nd[ns as usize];
                        *slot = Some(slot.map_or(v + w, |x: i64| x.min(v + w)));
                    }
                }
            }
            dp = nd;
        }
        dp.into_iter().flatten().min()
    }

    #[test]
    fn enumeration_matches_dp() {
        for n in [10, 13, 14, 16, 17, 19] {
            for cap in [d1_cap(n), d1_cap_mixed(n), d1_cap(n) - 7, n * (n - 1)] {
                assert_eq!(counting_contradiction(n, cap).unwrap(), dp_min(n, cap), "n={n} cap={cap}");
            }
        }
    }

    #[test]
    fn same_primary_rejects_other_n() {
        assert!(same_primary_branch(14).is_err());
        assert!(verify_small_case(15).is_err());
    }
}
