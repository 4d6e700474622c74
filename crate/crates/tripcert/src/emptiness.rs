//! Certifies that a parameter class (n, Δ, P) of near-extremal colorings is
//! empty, by checking the hypotheses of the structural bounds and then
//! enumerating every part-size configuration.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicI64, Ordering};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::admissible::{enumerate_admissible, AdmissiblePair};
use crate::fmin::f_exceeds;
use crate::numbers::{bip, NumberTables};
use crate::Q;

/// Below this vertex count the refined two-step bound on `b_U` is used.
pub const REFINED_BU_BELOW: i64 = 70;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GateParams {
    pub n: i64,
    pub delta: i64,
    pub p: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PartConfig {
    pub x_star: i64,
    pub y_star: i64,
    pub u: i64,
    pub b_xy: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PruneReason {
    NoAdmissiblePair,
    MBarNegative,
    Imbalance,
    NonPositiveMin,
    ImbalanceMass,
    UnderfullU,
    NoQuotaVertex,
    BxyInfeasible,
}

impl PruneReason {
    pub fn as_str(self) -> &'static str {
        match self {
            PruneReason::NoAdmissiblePair => "no-admissible-pair",
            PruneReason::MBarNegative => "mbar-negative",
            PruneReason::Imbalance => "part-imbalance",
            PruneReason::NonPositiveMin => "nonpositive-min",
            PruneReason::ImbalanceMass => "overline-m-c",
            PruneReason::UnderfullU => "overline-m-d",
            PruneReason::NoQuotaVertex => "no-quota-vertex",
            PruneReason::BxyInfeasible => "bxy-infeasible",
        }
    }
}

/// Quantities derived from one configuration before `τ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedBounds {
    pub eta: Q,
    pub m_bar: i64,
    pub x_bar_max: i64,
    pub y_bar_max: i64,
    pub x_min: i64,
    pub y_min: i64,
    /// `⌊(x* + y* + Δ)/2⌋`.
    pub m_cap: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauBreakdown {
    pub tau: i64,
    pub c_bxy: Q,
    pub c_rest: Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxBu {
    pub x: i64,
    pub y: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "stage", rename_all = "kebab-case")]
pub enum Failure {
    XyAssumption,
    SecondStep { s: i64, t: i64 },
    ThirdStepDtilde,
    ThirdStep { s: i64, t: i64, k: i64, w: i64, mirrored: bool },
    Tau { config: PartConfig, tau: i64, bound: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    EmptyTrivialPNegative,
    EmptyVerified,
    Failed(Failure),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GateStats {
    pub admissible_pairs: u64,
    pub third_step_probes: u64,
    pub configs: u64,
    pub pruned: BTreeMap<&'static str, u64>,
    pub tau_checked: u64,
    pub max_tau_slack: Option<i64>,
}

impl GateStats {
    fn prune(&mut self, r: PruneReason, count: u64) {
        *self.pruned.entry(r.as_str()).or_insert(0) += count;
    }

    fn merge(&mut self, o: &GateStats) {
        self.admissible_pairs += o.admissible_pairs;
        self.third_step_probes += o.third_step_probes;
        self.configs += o.configs;
        for (k, v) in &o.pruned {
            *self.pruned.entry(k).or_insert(0) += v;
        }
        self.tau_checked += o.tau_checked;
        self.max_tau_slack = match (self.max_tau_slack, o.max_tau_slack) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateCertificate {
    pub gate: GateParams,
    pub verdict: Verdict,
    pub stats: GateStats,
}

impl GateCertificate {
    pub fn is_empty_verified(&self) -> bool {
        matches!(self.verdict, Verdict::EmptyTrivialPNegative | Verdict::EmptyVerified)
    }
}

/// Everything about a gate that does not depend on the configuration.
#[derive(Debug, Clone)]
pub struct GateContext {
    pub gate: GateParams,
    pub half_p: i64,
    pub d_tilde: i64,
    pub quota: i64,
    pub half_n: i64,
    pub pairs: Vec<AdmissiblePair>,
    /// Smallest `s·t` over admissible pairs; 0 if there are none.
    pub min_product: i64,
}

impl GateContext {
    pub fn new(tables: &NumberTables, gate: GateParams) -> Self {
        let n = gate.n;
        let pairs = enumerate_admissible(tables, n, gate.delta);
        let min_product = pairs.iter().map(|p| p.s * p.t).min().unwrap_or(0);
        GateContext {
            gate,
            half_p: gate.p.div_euclid(2),
            d_tilde: tables.d_tilde(n),
            quota: tables.quota(n),
            half_n: (n + 1) / 2,
            pairs,
            min_product,
        }
    }

    pub fn eta(&self) -> Option<Q> {
        if self.pairs.is_empty() {
            None
        } else {
            Some(Q::new(self.half_p as i128, self.min_product as i128))
        }
    }
}

fn qi(x: i64) -> Q {
    Q::from_integer(x as i128)
}

fn pos(x: Q) -> Q {
    if x.is_positive() {
        x
    } else {
        Q::zero()
    }
}

fn floor_q(x: Q) -> i64 {
    x.floor().to_integer() as i64
}

/// `⌈12 g(n) / (n(n-1))⌉ >= ⌈n/2⌉`.
pub fn check_xy_assumption(tables: &NumberTables, n: i64) -> bool {
    let num = 12 * tables.g3(n);
    let den = n * (n - 1);
    num.div_euclid(den) + i64::from(num.rem_euclid(den) != 0) >= (n + 1) / 2
}

/// Pairs violating `F(s, t - ⌊P/2s⌋, ⌊(s+t+Δ)/2⌋) > P`.
pub fn certify_second_step(ctx: &GateContext) -> Vec<(i64, i64)> {
    let GateParams { delta, p, .. } = ctx.gate;
    ctx.pairs
        .iter()
        .filter(|pr| {
            let (s, t) = (pr.s, pr.t);
            let b = t - p.div_euclid(2 * s);
            !f_exceeds(qi(s), qi(b), qi((s + t + delta).div_euclid(2)), qi(p))
        })
        .map(|pr| (pr.s, pr.t))
        .collect()
}

/// Left side minus right side of the minimal-`w` inequality, scaled by `st`.
fn w_excess(s: i64, t: i64, k: i64, w: i64, dt: i64) -> i128 {
    let (s, t, k, w, dt) = (s as i128, t as i128, k as i128, w as i128, dt as i128);
    let st = s * t;
    let a = (st - k - w * s).max(0);
    let b = (st - k - w * t).max(0);
    t * a * a + s * b * b + st * (s - t) * (s - t) - st * (dt - 4 * k)
}

/// Smallest `w` in `[1, n-s-t]` with
/// `s(t - k/s - w)_+^2 + t(s - k/t - w)_+^2 + (s-t)^2 <= d̃(n) - 4k`.
pub fn minimal_w(n: i64, d_tilde: i64, s: i64, t: i64, k: i64) -> Option<i64> {
    let hi = n - s - t;
    if hi < 1 || w_excess(s, t, k, hi, d_tilde) > 0 {
        return None;
    }
    let (mut lo, mut hi) = (1, hi);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if w_excess(s, t, k, mid, d_tilde) <= 0 {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

/// Linear-scan reference for [`minimal_w`] in exact rationals.
pub fn minimal_w_scan(n: i64, d_tilde: i64, s: i64, t: i64, k: i64) -> Option<i64> {
    (1..=n - s - t).find(|&w| {
        let a = pos(qi(t) - Q::new(k as i128, s as i128) - qi(w));
        let b = pos(qi(s) - Q::new(k as i128, t as i128) - qi(w));
        qi(s) * a * a + qi(t) * b * b + qi((s - t) * (s - t)) <= qi(d_tilde - 4 * k)
    })
}

/// Both displayed F-inequalities at the minimal `w`, for all pairs and `k`.
pub fn certify_third_step(ctx: &GateContext) -> (Result<(), Failure>, u64) {
    let GateParams { n, delta, p } = ctx.gate;
    if 4 * ctx.d_tilde >= n * n {
        return (Err(Failure::ThirdStepDtilde), 0);
    }
    let h = ctx.half_p;
    let mut probes = 0u64;
    for pr in &ctx.pairs {
        let (s, t) = (pr.s, pr.t);
        let cap = qi((s + t + delta).div_euclid(2));
        for k in 0..=h {
            probes += 1;
            let Some(w) = minimal_w(n, ctx.d_tilde, s, t, k) else { continue };
            let wk_t = Q::new((w * k) as i128, t as i128);
            let num = qi(h - k) + wk_t;
            let rhs = qi(p - 2 * k) + wk_t;
            if !f_exceeds(qi(s), qi(w) - num / qi(s), cap, rhs) {
                return (Err(Failure::ThirdStep { s, t, k, w, mirrored: false }), probes);
            }
            if !f_exceeds(qi(w), qi(s) - num / qi(w), cap, rhs) {
                return (Err(Failure::ThirdStep { s, t, k, w, mirrored: true }), probes);
            }
        }
    }
    (Ok(()), probes)
}

/// `⌊P/2⌋ / min{st}` over admissible pairs.
pub fn eta_bound(ctx: &GateContext) -> crate::Result<Q> {
    ctx.eta().ok_or(crate::Error::EmptyAdmissibleSet)
}

/// Exact-rational evaluation of the part-size bounds for one configuration.
pub fn derive_bounds(ctx: &GateContext, cfg: &PartConfig) -> Result<DerivedBounds, PruneReason> {
    let GateParams { n, delta, .. } = ctx.gate;
    let eta = ctx.eta().ok_or(PruneReason::NoAdmissiblePair)?;
    let PartConfig { x_star: xs, y_star: ys, u, b_xy: b } = *cfg;
    let one = Q::from_integer(1);
    let den = (one - eta) * (Q::new(n as i128, 4) - Q::new(delta as i128, 2));
    let second = xs + ys - ctx.half_n;
    let m_bar = if den.is_positive() {
        let first = floor_q(qi(ctx.half_p - b) / den * (one + Q::new(1, u as i128)));
        first.min(second)
    } else {
        second
    };
    if m_bar < 0 {
        return Err(PruneReason::MBarNegative);
    }
    if (xs - ys).abs() > m_bar + delta {
        return Err(PruneReason::Imbalance);
    }
    let x_bar_max = m_bar + (xs - ys + delta).min(0);
    let y_bar_max = m_bar + (ys - xs + delta).min(0);
    let x_min = xs - x_bar_max;
    let y_min = ys - y_bar_max;
    if x_min <= 0 || y_min <= 0 {
        return Err(PruneReason::NonPositiveMin);
    }
    let rhs = qi(ctx.d_tilde - 4 * b);
    let sq = |x: Q| pos(x) * pos(x);
    let f = one - eta;
    let lhs_c = qi(x_min) * sq(f * qi(y_min) - qi(u)) + qi(y_min) * sq(f * qi(x_min) - qi(u));
    if lhs_c > rhs {
        return Err(PruneReason::ImbalanceMass);
    }
    let lhs_d = qi(x_min) * sq(f * qi(u) - qi(ys)) + qi(y_min) * sq(f * qi(u) - qi(xs));
    if lhs_d > rhs {
        return Err(PruneReason::UnderfullU);
    }
    Ok(DerivedBounds {
        eta,
        m_bar,
        x_bar_max,
        y_bar_max,
        x_min,
        y_min,
        m_cap: (xs + ys + delta).div_euclid(2),
    })
}

/// Upper bound on edges across the tripartition not in the pivot color.
pub fn compute_tau(ctx: &GateContext, cfg: &PartConfig, bd: &DerivedBounds) -> TauBreakdown {
    let (xm, ym, u) = (qi(bd.x_min), qi(bd.y_min), qi(cfg.u));
    let one = Q::from_integer(1);
    let base = one + qi(bd.x_bar_max) / xm + qi(bd.y_bar_max) / ym;
    let c_bxy = base + u * qi(cfg.x_star + cfg.y_star) / (xm * ym);
    let c_rest = base * (one / xm + one / ym + one / u);
    let rest = qi(ctx.half_p - cfg.b_xy);
    let total = c_bxy * qi(cfg.b_xy) + c_rest * rest + qi(bd.x_bar_max * bd.y_bar_max);
    TauBreakdown { tau: floor_q(total), c_bxy, c_rest }
}

fn quota_bound_large(ctx: &GateContext, a: i64, b_other: i64, u: i64, tau: i64) -> Option<i64> {
    let q = ctx.quota;
    if bip(a) + bip(b_other) + bip(u) + tau > q - 1 {
        return Some(u);
    }
    (0..=u)
        .rev()
        .find(|&b| (u - b) * b_other + bip(a - 1) + bip(b) + tau - b >= q)
}

fn quota_bound_small(ctx: &GateContext, a: i64, b_other: i64, u: i64, tau: i64) -> Option<i64> {
    let q = ctx.quota;
    let delta = ctx.gate.delta;
    (0..=u).rev().find(|&b| {
        let lo = (b_other - (u - b + delta)).max(0);
        let hi = b_other.min(b_other - (u - b - delta));
        [lo, hi].iter().any(|&bp| {
            (u - b) * (b_other - bp) + bip(a - 1) + bip(b) + bip(bp) + tau - b - bp >= q
        })
    })
}

/// Refinement of the small-`n` bound once `b_U(x) <= |U|/2` is known.
fn bootstrap(ctx: &GateContext, cfg: &PartConfig, bd: &DerivedBounds, other: i64, b_max: i64) -> i64 {
    let GateParams { delta, p, .. } = ctx.gate;
    let (u, bxy, h) = (cfg.u, cfg.b_xy, ctx.half_p);
    let b_uo = (u * bxy + (h - bxy)) * other / (bd.x_min * bd.y_min);
    let excess = (bxy - other).max(0);
    let mut applies = 2 * b_max <= u;
    if !applies {
        let qv = p - 2 * excess;
        let second = u - (qv + 2 * b_uo).div_euclid(2 * other);
        let cap = Q::new((cfg.x_star + cfg.y_star + delta) as i128, 2);
        applies = f_exceeds(qi(other), qi(second), cap, qi(qv + b_uo));
    }
    if applies {
        b_max.min((h - excess + b_uo).div_euclid(other))
    } else {
        b_max
    }
}

/// Bounds on `b_U(x)` over `x ∈ X*` and `y ∈ Y*`.
pub fn max_bu(ctx: &GateContext, cfg: &PartConfig, bd: &DerivedBounds, tau: i64) -> Result<MaxBu, PruneReason> {
    let PartConfig { x_star: xs, y_star: ys, u, .. } = *cfg;
    if ctx.gate.n >= REFINED_BU_BELOW {
        let x = quota_bound_large(ctx, xs, ys, u, tau).ok_or(PruneReason::NoQuotaVertex)?;
        let y = quota_bound_large(ctx, ys, xs, u, tau).ok_or(PruneReason::NoQuotaVertex)?;
        Ok(MaxBu { x, y })
    } else {
        let x = quota_bound_small(ctx, xs, ys, u, tau).ok_or(PruneReason::NoQuotaVertex)?;
        let x = bootstrap(ctx, cfg, bd, ys, x);
        let y = quota_bound_small(ctx, ys, xs, u, tau).ok_or(PruneReason::NoQuotaVertex)?;
        let y = bootstrap(ctx, cfg, bd, xs, y);
        Ok(MaxBu { x, y })
    }
}

/// Both bad-edge inequalities for the given `b_XY`.
pub fn bxy_feasible(ctx: &GateContext, cfg: &PartConfig, bd: &DerivedBounds, mb: MaxBu) -> bool {
    let b = cfg.b_xy;
    let lhs = (cfg.u - mb.x - mb.y) * b;
    lhs <= ctx.half_p && lhs <= b * (b - 1) / 2 + b * (bd.x_bar_max + bd.y_bar_max + mb.x.min(mb.y))
}

/// Outcome for one `(config, b_XY)` combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    Pruned(PruneReason),
    /// `τ` compared against `2·min(x*, y*, u)`.
    Tau { tau: i64, bound: i64 },
}

/// Reference evaluation of one combination with exact rationals.
pub fn resolve_exact(ctx: &GateContext, cfg: &PartConfig) -> Resolution {
    let bd = match derive_bounds(ctx, cfg) {
        Ok(bd) => bd,
        Err(r) => return Resolution::Pruned(r),
    };
    let tau = compute_tau(ctx, cfg, &bd).tau;
    let mb = match max_bu(ctx, cfg, &bd, tau) {
        Ok(mb) => mb,
        Err(r) => return Resolution::Pruned(r),
    };
    if !bxy_feasible(ctx, cfg, &bd, mb) {
        return Resolution::Pruned(PruneReason::BxyInfeasible);
    }
    Resolution::Tau { tau, bound: 2 * cfg.x_star.min(cfg.y_star).min(cfg.u) }
}

/// Integer-only evaluation used by the enumeration.
struct Fast<'a> {
    ctx: &'a GateContext,
    /// `m - ⌊P/2⌋`, so that `1 - η = e/m`.
    e: i128,
    m: i128,
    den_pos: bool,
}

impl<'a> Fast<'a> {
    fn new(ctx: &'a GateContext) -> Self {
        let m = ctx.min_product as i128;
        let e = m - ctx.half_p as i128;
        let nd = (ctx.gate.n - 2 * ctx.gate.delta) as i128;
        Fast { ctx, e, m, den_pos: e * nd > 0 }
    }

    fn m_bar(&self, u: i64, second: i64, b: i64) -> i64 {
        if !self.den_pos {
            return second;
        }
        let nd = (self.ctx.gate.n - 2 * self.ctx.gate.delta) as i128;
        let num = (self.ctx.half_p - b) as i128 * (u as i128 + 1) * 4 * self.m;
        let den = u as i128 * self.e * nd;
        let first = num.div_euclid(den);
        if first < second as i128 {
            first as i64
        } else {
            second
        }
    }

    fn resolve(&self, u: i64, xs: i64, ys: i64, b: i64) -> Resolution {
        let ctx = self.ctx;
        let delta = ctx.gate.delta;
        let m_bar = self.m_bar(u, xs + ys - ctx.half_n, b);
        if m_bar < 0 {
            return Resolution::Pruned(PruneReason::MBarNegative);
        }
        if (xs - ys).abs() > m_bar + delta {
            return Resolution::Pruned(PruneReason::Imbalance);
        }
        let xb = m_bar + (xs - ys + delta).min(0);
        let yb = m_bar + (ys - xs + delta).min(0);
        let (xm, ym) = (xs - xb, ys - yb);
        if xm <= 0 || ym <= 0 {
            return Resolution::Pruned(PruneReason::NonPositiveMin);
        }
        let (e, m) = (self.e, self.m);
        let rhs = (ctx.d_tilde - 4 * b) as i128 * m * m;
        let (xm_, ym_, u_) = (xm as i128, ym as i128, u as i128);
        let sqp = |x: i128| if x > 0 { x * x } else { 0 };
        if xm_ * sqp(e * ym_ - u_ * m) + ym_ * sqp(e * xm_ - u_ * m) > rhs {
            return Resolution::Pruned(PruneReason::ImbalanceMass);
        }
        if xm_ * sqp(e * u_ - m * ys as i128) + ym_ * sqp(e * u_ - m * xs as i128) > rhs {
            return Resolution::Pruned(PruneReason::UnderfullU);
        }
        let (xb_, yb_) = (xb as i128, yb as i128);
        let p2 = xm_ * ym_;
        let n1 = p2 + xb_ * ym_ + yb_ * xm_ + u_ * (xs + ys) as i128;
        let n2 = p2 + xb_ * ym_ + yb_ * xm_;
        let n3 = ym_ * u_ + xm_ * u_ + p2;
        let num = n1 * p2 * u_ * b as i128 + n2 * n3 * (ctx.half_p - b) as i128;
        let tau = (num.div_euclid(p2 * p2 * u_) + xb_ * yb_) as i64;
        let mb = if ctx.gate.n >= REFINED_BU_BELOW {
            let x = self.quota_bound(xs, ys, u, tau);
            let y = self.quota_bound(ys, xs, u, tau);
            match (x, y) {
                (Some(x), Some(y)) => MaxBu { x, y },
                _ => return Resolution::Pruned(PruneReason::NoQuotaVertex),
            }
        } else {
            let cfg = PartConfig { x_star: xs, y_star: ys, u, b_xy: b };
            let bd = DerivedBounds {
                eta: Q::zero(),
                m_bar,
                x_bar_max: xb,
                y_bar_max: yb,
                x_min: xm,
                y_min: ym,
                m_cap: (xs + ys + delta).div_euclid(2),
            };
            match max_bu(ctx, &cfg, &bd, tau) {
                Ok(mb) => mb,
                Err(r) => return Resolution::Pruned(r),
            }
        };
        let lhs = (u - mb.x - mb.y) * b;
        if lhs > ctx.half_p || lhs > b * (b - 1) / 2 + b * (xb + yb + mb.x.min(mb.y)) {
            return Resolution::Pruned(PruneReason::BxyInfeasible);
        }
        Resolution::Tau { tau, bound: 2 * xs.min(ys).min(u) }
    }

    /// Largest `b` meeting the quota; the feasible set is a prefix of
    /// `[0, u]` once `b = u` fails, since the left side is convex in `b`.
    fn quota_bound(&self, a: i64, other: i64, u: i64, tau: i64) -> Option<i64> {
        let q = self.ctx.quota;
        if bip(a) + bip(other) + bip(u) + tau > q - 1 {
            return Some(u);
        }
        let f = |b: i64| (u - b) * other + bip(a - 1) + bip(b) + tau - b >= q;
        if f(u) {
            return Some(u);
        }
        if !f(0) {
            return None;
        }
        let (mut lo, mut hi) = (0, u);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if f(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CertifyOptions {
    /// Re-evaluate every k-th combination with the exact reference path.
    pub audit_stride: Option<u64>,
}

struct SliceResult {
    stats: GateStats,
    failure: Option<Failure>,
}

fn run_u(fast: &Fast, u: i64, audit: Option<u64>) -> SliceResult {
    let ctx = fast.ctx;
    let n = ctx.gate.n;
    let h = ctx.half_p;
    let mut st = GateStats::default();
    for xs in 1..n - u {
        let ys = n - u - xs;
        if ys < 1 || xs + ys < ctx.half_n {
            continue;
        }
        let mut b = 0;
        while b <= h {
            st.configs += 1;
            let res = fast.resolve(u, xs, ys, b);
            if let Some(k) = audit {
                if st.configs % k == 0 {
                    let cfg = PartConfig { x_star: xs, y_star: ys, u, b_xy: b };
                    let exact = resolve_exact(ctx, &cfg);
                    assert_eq!(res, exact, "fast and exact evaluation disagree at {cfg:?}");
                }
            }
            match res {
                Resolution::Pruned(PruneReason::Imbalance) => {
                    // M̄ is nonincreasing in b_XY, so every larger b_XY
                    // fails the same test first
                    st.prune(PruneReason::Imbalance, (h - b + 1) as u64);
                    st.configs += (h - b) as u64;
                    break;
                }
                Resolution::Pruned(r) => st.prune(r, 1),
                Resolution::Tau { tau, bound } => {
                    st.tau_checked += 1;
                    let slack = tau - bound;
                    st.max_tau_slack = Some(st.max_tau_slack.map_or(slack, |m| m.max(slack)));
                    if tau > bound {
                        let config = PartConfig { x_star: xs, y_star: ys, u, b_xy: b };
                        return SliceResult { stats: st, failure: Some(Failure::Tau { config, tau, bound }) };
                    }
                }
            }
            b += 1;
        }
    }
    SliceResult { stats: st, failure: None }
}

pub fn certify_gate_empty(tables: &NumberTables, gate: GateParams) -> GateCertificate {
    certify_gate_empty_with(tables, gate, CertifyOptions::default())
}

pub fn certify_gate_empty_with(tables: &NumberTables, gate: GateParams, opts: CertifyOptions) -> GateCertificate {
    let mut stats = GateStats::default();
    let done = |verdict, stats| GateCertificate { gate, verdict, stats };
    if gate.p < 0 {
        return done(Verdict::EmptyTrivialPNegative, stats);
    }
    if !check_xy_assumption(tables, gate.n) {
        return done(Verdict::Failed(Failure::XyAssumption), stats);
    }
    let ctx = GateContext::new(tables, gate);
    stats.admissible_pairs = ctx.pairs.len() as u64;
    if ctx.pairs.is_empty() {
        stats.prune(PruneReason::NoAdmissiblePair, 1);
        return done(Verdict::EmptyVerified, stats);
    }
    if let Some(&(s, t)) = certify_second_step(&ctx).first() {
        return done(Verdict::Failed(Failure::SecondStep { s, t }), stats);
    }
    let (third, probes) = certify_third_step(&ctx);
    stats.third_step_probes = probes;
    if let Err(f) = third {
        return done(Verdict::Failed(f), stats);
    }
    let fast = Fast::new(&ctx);
    let n = gate.n;
    let first_fail = AtomicI64::new(i64::MAX);
    let slices: Vec<(i64, Option<SliceResult>)> = (1..=n - 2)
        .into_par_iter()
        .map(|u| {
            if u > first_fail.load(Ordering::Relaxed) {
                return (u, None);
            }
            let r = run_u(&fast, u, opts.audit_stride);
            if r.failure.is_some() {
                first_fail.fetch_min(u, Ordering::Relaxed);
            }
            (u, Some(r))
        })
        .collect();
    for (_, r) in slices {
        // slices past the first failing u may be missing; stop there
        let Some(r) = r else { break };
        stats.merge(&r.stats);
        if let Some(f) = r.failure {
            return done(Verdict::Failed(f), stats);
        }
    }
    done(Verdict::EmptyVerified, stats)
}
