//! Floating-point checks of the induction conditions for k ≥ 7, with exact
//! big-integer checks of the lower bound on g_k.

use astro_float::{BigFloat, Consts, RoundingMode};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numbers::g_k;

/// Default margin on every float comparison.
pub const DEFAULT_SAFETY: f64 = 1e-6;
/// Absolute tolerance of the γ solver.
pub const GAMMA_TOL: f64 = 1e-12;

/// `(α, β)` at `(k, n)`.
pub fn alpha_beta(k: u32, n: u64) -> (f64, f64) {
    let (kf, nf) = (k as f64, n as f64);
    let small = kf.powi(3) / (2.0 * nf * nf);
    let alpha = 1.0 - (1.0 - 1.0 / kf).powf(kf / (kf - 2.0)) * (1.0 - small).powf(2.0 / (kf - 2.0));
    let beta = small + (alpha * kf / (kf - 1.0)).powf(kf / 2.0);
    (alpha, beta)
}

fn gamma_map(g: f64) -> f64 {
    (-2.0 * g).exp() * (1.0 + g).powi(2)
}

/// Positive root of `e^{-2γ}(1+γ)² = 1 − β`.
pub fn solve_gamma(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::BetaOutOfRange(beta));
    }
    let target = 1.0 - beta;
    let mut hi = 1.0;
    while gamma_map(hi) >= target {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    while hi - lo > GAMMA_TOL / 4.0 {
        let mid = 0.5 * (lo + hi);
        if gamma_map(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HighKProbe {
    pub k: u32,
    pub n: u64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `α^{(k−2)/2} (k/(k−3))^{k−2}`.
    pub lhs: f64,
    /// `α^{(k−2)/2} e³`, the looser form the printed comparison uses.
    pub lhs_e3: f64,
    /// `e^{−2γ}`.
    pub rhs: f64,
    pub margin: f64,
    pub escalated: bool,
    pub holds: bool,
}

impl HighKProbe {
    pub fn new(k: u32, n: u64, safety: f64) -> Result<Self> {
        if k < 4 {
            return Err(Error::Precondition(format!("high-k probe needs k >= 4, got {k}")));
        }
        let (alpha, beta) = alpha_beta(k, n);
        let in_range = alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0;
        let gamma = if in_range { solve_gamma(beta)? } else { f64::NAN };
        let kf = k as f64;
        let base = alpha.powf((kf - 2.0) / 2.0);
        let lhs = base * (kf / (kf - 3.0)).powf(kf - 2.0);
        let lhs_e3 = base * 3f64.exp();
        let rhs = (-2.0 * gamma).exp();
        let margin = rhs - lhs;
        let (holds, escalated) = if !in_range {
            (false, false)
        } else if margin.abs() <= 2.0 * safety {
            (precise::lhs_below_rhs(k, n), true)
        } else {
            (lhs + safety < rhs, false)
        };
        Ok(HighKProbe { k, n, alpha, beta, gamma, lhs, lhs_e3, rhs, margin, escalated, holds })
    }
}

/// `α, β ∈ (0,1)` and `α^{(k−2)/2} (k/(k−3))^{k−2} < e^{−2γ}` with a safety margin.
pub fn check_big_nk(k: u32, n: u64, safety: f64) -> bool {
    HighKProbe::new(k, n, safety).is_ok_and(|p| p.holds)
}

/// 256-bit re-evaluation for comparisons too close for doubles.
mod precise {
    use super::*;

    const P: usize = 256;
    const RM: RoundingMode = RoundingMode::ToEven;

    fn int(x: u64) -> BigFloat {
        BigFloat::from_u64(x, P)
    }

    fn powf(x: &BigFloat, y: &BigFloat, cc: &mut Consts) -> BigFloat {
        x.pow(y, P, RM, cc)
    }

    fn gamma_map(g: &BigFloat, cc: &mut Consts) -> BigFloat {
        let e = g.mul(&int(2), P, RM).neg().exp(P, RM, cc);
        let s = g.add(&int(1), P, RM);
        e.mul(&s.mul(&s, P, RM), P, RM)
    }

    pub fn lhs_below_rhs(k: u32, n: u64) -> bool {
        let mut cc = Consts::new().expect("constants cache");
        let one = int(1);
        let (kb, nb) = (int(k as u64), int(n));
        let k2 = kb.sub(&int(2), P, RM);
        let small = kb.mul(&kb, P, RM).mul(&kb, P, RM).div(&nb.mul(&nb, P, RM).mul(&int(2), P, RM), P, RM);
        let first = powf(&one.sub(&one.div(&kb, P, RM), P, RM), &kb.div(&k2, P, RM), &mut cc);
        let second = powf(&one.sub(&small, P, RM), &int(2).div(&k2, P, RM), &mut cc);
        let alpha = one.sub(&first.mul(&second, P, RM), P, RM);
        let ratio = alpha.mul(&kb, P, RM).div(&kb.sub(&one, P, RM), P, RM);
        let beta = small.add(&powf(&ratio, &kb.div(&int(2), P, RM), &mut cc), P, RM);
        let target = one.sub(&beta, P, RM);
        let mut hi = one.clone();
        while gamma_map(&hi, &mut cc) >= target {
            hi = hi.mul(&int(2), P, RM);
        }
        let mut lo = BigFloat::from_u64(0, P);
        let half = BigFloat::from_f64(0.5, P);
        for _ in 0..200 {
            let mid = lo.add(&hi, P, RM).mul(&half, P, RM);
            if gamma_map(&mid, &mut cc) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // the root lies in [lo, hi]; e^{-2γ} is smallest at hi
        let rhs = hi.mul(&int(2), P, RM).neg().exp(P, RM, &mut cc);
        let lhs = powf(&alpha, &k2.div(&int(2), P, RM), &mut cc)
            .mul(&powf(&kb.div(&kb.sub(&int(3), P, RM), P, RM), &k2, &mut cc), P, RM);
        lhs < rhs
    }
}

/// Exact `k^k · 2n² · g_k(n) ≥ (2n² − k³) · n^k`.
pub fn check_g_lower_bound(k: u32, n: u64) -> Result<bool> {
    if k < 3 || n < (k * (k - 1) + 1) as u64 {
        return Err(Error::Precondition(format!("need k >= 3 and n >= k(k-1)+1, got ({k}, {n})")));
    }
    let g = BigInt::from(g_k(k, n));
    let nn = BigInt::from(n);
    let kk = BigInt::from(k);
    let two_n2 = BigInt::from(2) * &nn * &nn;
    let lhs = kk.pow(k) * &two_n2 * g;
    let rhs = (two_n2 - kk.pow(3)) * nn.pow(k);
    Ok(lhs >= rhs)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub k_max: u32,
    pub checked: u64,
    /// Same checks over n beyond the threshold, which the argument does not need.
    pub redundant_n_scan: bool,
    pub first_violation: Option<String>,
}

/// α, β decrease in n over `[k(k−1)+1, 4k²]` and in k at the threshold.
pub fn monotonicity_scan(k_max: u32) -> Result<MonotonicityReport> {
    if k_max < 8 {
        return Err(Error::Precondition(format!("monotonicity scan needs k_max >= 8, got {k_max}")));
    }
    let per_k: Vec<(u64, Option<String>)> = (7..=k_max)
        .into_par_iter()
        .map(|k| {
            let start = (k * (k - 1) + 1) as u64;
            let end = 4 * (k as u64) * (k as u64);
            let mut prev = alpha_beta(k, start);
            let mut checked = 0;
            for n in start + 1..=end {
                let cur = alpha_beta(k, n);
                checked += 1;
                if !(cur.0 < prev.0 && cur.1 < prev.1) {
                    return (checked, Some(format!("k={k}: no decrease from n={} to n={n}", n - 1)));
                }
                prev = cur;
            }
            (checked, None)
        })
        .collect();
    let mut rep = MonotonicityReport { k_max, redundant_n_scan: true, ..Default::default() };
    for (c, v) in per_k {
        rep.checked += c;
        if rep.first_violation.is_none() {
            rep.first_violation = v;
        }
    }
    for k in 7..k_max {
        let a = alpha_beta(k, (k * (k - 1) + 1) as u64);
        let b = alpha_beta(k + 1, ((k + 1) * k + 1) as u64);
        rep.checked += 1;
        if rep.first_violation.is_none() && !(b.0 < a.0 && b.1 < a.1) {
            rep.first_violation = Some(format!("threshold values do not decrease from k={k} to k={}", k + 1));
        }
    }
    Ok(rep)
}

/// Triangle count of a graph given by adjacency bitmasks.
fn triangles(adj: &[u32]) -> u64 {
    let n = adj.len();
    let mut t = 0;
    for x in 0..n {
        for y in x + 1..n {
            if adj[x] >> y & 1 == 1 {
                t += (adj[x] & adj[y] & !((2u32 << y) - 1)).count_ones() as u64;
            }
        }
    }
    t
}

/// Random subgraphs of random complete tripartite graphs obey
/// `triangles ≤ (edges/3)^{3/2}`.
pub fn lw_sample_check(trials: u64, seed: u64) -> Result<bool> {
    if trials == 0 {
        return Err(Error::Precondition("need at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let n = rng.gen_range(3..=12);
        let part: Vec<u8> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let density: f64 = rng.gen_range(0.3..=1.0);
        let mut adj = vec![0u32; n];
        let mut edges = 0u64;
        for u in 0..n {
            for v in u + 1..n {
                if part[u] != part[v] && rng.gen_bool(density) {
                    adj[u] |= 1 << v;
                    adj[v] |= 1 << u;
                    edges += 1;
                }
            }
        }
        if triangles(&adj) as f64 > (edges as f64 / 3.0).powf(1.5) + 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}
