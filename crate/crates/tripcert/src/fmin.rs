//! The constrained cross-product minimum F(A, B, C).
//!
//! F is the infimum of `sum_{i != j} a_i b_j` over pairs of nonnegative
//! sequences of a common length with `sum a = A`, `sum b = B` and
//! `a_i + b_i <= C` for every block.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FQuery {
    pub a: Q,
    pub b: Q,
    pub c: Q,
}

impl FQuery {
    pub fn new(a: Q, b: Q, c: Q) -> Self {
        FQuery { a, b, c }
    }

    pub fn ints(a: i128, b: i128, c: i128) -> Self {
        FQuery::new(Q::from_integer(a), Q::from_integer(b), Q::from_integer(c))
    }
}

/// Optimal block structure: all blocks but the last are full.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimizerWitness {
    pub len: usize,
    pub a: Vec<Q>,
    pub b: Vec<Q>,
    pub d: Q,
    pub d_last: Q,
}

impl MinimizerWitness {
    pub fn cross_sum(&self) -> Q {
        cross_sum(&self.a, &self.b)
    }

    /// Checks every composition constraint exactly.
    pub fn is_feasible(&self, q: &FQuery) -> bool {
        let sa: Q = self.a.iter().sum();
        let sb: Q = self.b.iter().sum();
        sa == q.a
            && sb == q.b
            && self
                .a
                .iter()
                .zip(&self.b)
                .all(|(x, y)| !x.is_negative() && !y.is_negative() && x + y <= q.c)
    }
}

/// `sum_{i != j} a_i b_j`.
pub fn cross_sum(a: &[Q], b: &[Q]) -> Q {
    let sa: Q = a.iter().sum();
    let sb: Q = b.iter().sum();
    let diag: Q = a.iter().zip(b).map(|(x, y)| x * y).sum();
    sa * sb - diag
}

fn ceil_q(x: Q) -> i128 {
    let (n, d) = (*x.numer(), *x.denom());
    -((-n).div_euclid(d))
}

struct Shape {
    len: i128,
    d: Q,
    d_last: Q,
    last_sum: Q,
}

fn shape(q: &FQuery) -> Shape {
    let total = q.a + q.b;
    let len = ceil_q(total / q.c).max(1);
    let last_sum = total - q.c * Q::from_integer(len - 1);
    let diff = q.a - q.b;
    let even = diff / Q::from_integer(len);
    if even.abs() <= last_sum {
        Shape { len, d: even, d_last: even, last_sum }
    } else {
        let d_last = if diff.is_positive() { last_sum } else { -last_sum };
        let d = (diff - d_last) / Q::from_integer(len - 1);
        Shape { len, d, d_last, last_sum }
    }
}

/// Optimal witness; `None` when A or B is nonpositive (F = 0 by convention).
pub fn minimizer(q: &FQuery) -> Result<Option<MinimizerWitness>> {
    if !q.c.is_positive() {
        return Err(Error::NonPositiveCap);
    }
    if !q.a.is_positive() || !q.b.is_positive() {
        return Ok(None);
    }
    let s = shape(q);
    let two = Q::from_integer(2);
    let len = s.len as usize;
    let mut a = vec![(q.c + s.d) / two; len - 1];
    let mut b = vec![(q.c - s.d) / two; len - 1];
    a.push((s.last_sum + s.d_last) / two);
    b.push((s.last_sum - s.d_last) / two);
    Ok(Some(MinimizerWitness { len, a, b, d: s.d, d_last: s.d_last }))
}

/// Exact value of F(A, B, C).
pub fn f_value(q: &FQuery) -> Result<Q> {
    if !q.c.is_positive() {
        return Err(Error::NonPositiveCap);
    }
    if !q.a.is_positive() || !q.b.is_positive() {
        return Ok(Q::zero());
    }
    let s = shape(q);
    let full = Q::from_integer(s.len - 1) * (q.c * q.c - s.d * s.d);
    let last = s.last_sum * s.last_sum - s.d_last * s.d_last;
    Ok(q.a * q.b - (full + last) / Q::from_integer(4))
}

/// `F(a, b, c) > rhs`; panics on a nonpositive cap.
pub fn f_exceeds(a: Q, b: Q, c: Q, rhs: Q) -> bool {
    f_value(&FQuery::new(a, b, c)).expect("positive cap") > rhs
}

fn compositions(total: i64, parts: usize, out: &mut Vec<Vec<i64>>, cur: &mut Vec<i64>) {
    if parts == 1 {
        cur.push(total);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for x in 0..=total {
        cur.push(x);
        compositions(total - x, parts - 1, out, cur);
        cur.pop();
    }
}

fn round_q(x: Q) -> i64 {
    let (n, d) = (*x.numer(), *x.denom());
    (2 * n + d).div_euclid(2 * d) as i64
}

/// Grid upper bound on F: block entries on multiples of `C/resolution`,
/// rows rescaled to the exact targets, for the optimal length and one more.
pub fn f_grid_oracle(q: &FQuery, resolution: u32) -> Result<Q> {
    if !q.c.is_positive() {
        return Err(Error::NonPositiveCap);
    }
    if !q.a.is_positive() || !q.b.is_positive() {
        return Err(Error::Precondition("grid oracle needs A, B > 0".into()));
    }
    let res = Q::from_integer(resolution as i128);
    let sa = round_q(q.a * res / q.c).max(1);
    let sb = round_q(q.b * res / q.c).max(1);
    let base = ceil_q((q.a + q.b) / q.c).max(1) as usize;
    let mut best: Option<Q> = None;
    for len in [base, base + 1] {
        let mut ca = Vec::new();
        compositions(sa, len, &mut ca, &mut Vec::new());
        // a_i = A x_i / sa, b_i = B y_i / sb; cap test in integers
        let ka = q.a / Q::from_integer(sa as i128);
        let kb = q.b / Q::from_integer(sb as i128);
        let lcm = ka.denom().lcm(kb.denom()).lcm(q.c.denom());
        let wa = (ka * Q::from_integer(lcm)).to_integer();
        let wb = (kb * Q::from_integer(lcm)).to_integer();
        let wc = (q.c * Q::from_integer(lcm)).to_integer();
        // for a fixed a-row the best b-row fills the largest a-blocks first
        let mut best_diag: Option<i128> = None;
        for x in &ca {
            if x.iter().any(|&xi| wa * xi as i128 > wc) {
                continue;
            }
            let mut order: Vec<usize> = (0..len).collect();
            order.sort_by_key(|&i| std::cmp::Reverse(x[i]));
            let mut left = sb as i128;
            let mut diag = 0i128;
            for i in order {
                let cap = (wc - wa * x[i] as i128) / wb;
                let y = cap.min(left);
                diag += x[i] as i128 * y;
                left -= y;
            }
            if left == 0 && best_diag.is_none_or(|bd| diag > bd) {
                best_diag = Some(diag);
            }
        }
        if let Some(diag) = best_diag {
            let val = q.a * q.b - ka * kb * Q::from_integer(diag);
            if best.is_none_or(|b| val < b) {
                best = Some(val);
            }
        }
    }
    best.ok_or(Error::InfeasibleGrid(resolution))
}

fn random_q(rng: &mut impl Rng, max_num: i128) -> Q {
    Q::new(rng.gen_range(1..=max_num), rng.gen_range(1..=6))
}

/// Positive triple with `A, B <= 2C`, small enough for the grid oracle.
pub fn random_triple(rng: &mut impl Rng) -> FQuery {
    let c = random_q(rng, 24);
    let a = c * Q::new(rng.gen_range(1..=12), 6);
    let b = c * Q::new(rng.gen_range(1..=12), 6);
    FQuery::new(a, b, c)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FCheckReport {
    pub trials: u64,
    /// Failures keyed by property name; absent keys passed every trial.
    pub failures: BTreeMap<&'static str, u64>,
}

impl FCheckReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, name: &'static str, ok: bool) {
        if !ok {
            *self.failures.entry(name).or_insert(0) += 1;
        }
    }
}

/// `f_value <= grid <= f_value + 8AB/resolution`, plus witness checks.
pub fn f_sandwich_check(trials: u64, resolution: u32, seed: u64) -> Result<FCheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = FCheckReport { trials, ..Default::default() };
    for _ in 0..trials {
        let q = random_triple(&mut rng);
        let f = f_value(&q)?;
        let g = f_grid_oracle(&q, resolution)?;
        let slack = q.a * q.b * Q::from_integer(8) / Q::from_integer(resolution as i128);
        rep.record("sandwich", f <= g && g <= f + slack);
        let w = minimizer(&q)?.expect("positive triple");
        rep.record("witness-feasible", w.is_feasible(&q));
        rep.record("witness-value", w.cross_sum() == f);
    }
    Ok(rep)
}

/// Symmetry, monotonicity, scaling, ratio bound, positivity and witness
/// consistency on seeded random triples.
pub fn f_property_check(trials: u64, seed: u64) -> Result<FCheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = FCheckReport { trials, ..Default::default() };
    let f = |a: Q, b: Q, c: Q| f_value(&FQuery::new(a, b, c));
    for _ in 0..trials {
        let (a, b, c) = (random_q(&mut rng, 60), random_q(&mut rng, 60), random_q(&mut rng, 60));
        let v = f(a, b, c)?;
        rep.record("symmetry", v == f(b, a, c)?);
        let eps = random_q(&mut rng, 12);
        rep.record(
            "monotonicity",
            f(a + eps, b, c)? >= v && f(a, b + eps, c)? >= v && f(a, b, c + eps)? <= v,
        );
        let lambda = random_q(&mut rng, 12);
        rep.record("scaling", f(lambda * a, lambda * b, lambda * c)? == lambda * lambda * v);
        let b2 = b * Q::new(rng.gen_range(1..=12), 12);
        rep.record("ratio-bound", b2 / b * v >= f(a, b2, c)?);
        rep.record("positivity", v.is_positive() == (a + b > c));
        let q = FQuery::new(a, b, c);
        let w = minimizer(&q)?.expect("positive triple");
        rep.record("witness", w.is_feasible(&q) && w.cross_sum() == v);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128, d: i128) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn listed_values() {
        assert_eq!(f_value(&FQuery::ints(2, 2, 4)).unwrap(), Q::zero());
        assert_eq!(f_value(&FQuery::ints(1, 1, 1)).unwrap(), q(1, 2));
        assert_eq!(f_value(&FQuery::ints(3, 1, 2)).unwrap(), q(3, 2));
        assert_eq!(f_value(&FQuery::ints(4, 1, 2)).unwrap(), q(5, 2));
        assert_eq!(f_value(&FQuery::ints(0, 5, 2)).unwrap(), Q::zero());
        assert_eq!(f_value(&FQuery::ints(-1, 5, 2)).unwrap(), Q::zero());
        assert!(f_value(&FQuery::ints(1, 1, 0)).is_err());
    }

    #[test]
    fn boundary_witness() {
        let w = minimizer(&FQuery::ints(4, 1, 2)).unwrap().unwrap();
        assert_eq!(w.len, 3);
        assert_eq!(w.a[2], Q::from_integer(1));
        assert_eq!(w.b[2], Q::zero());
        assert_eq!(w.cross_sum(), q(5, 2));
    }

    #[test]
    fn grid_brackets() {
        let g = f_grid_oracle(&FQuery::ints(1, 1, 1), 64).unwrap();
        assert!(g >= q(1, 2) && g <= q(1, 2) + q(4, 64));
        let g = f_grid_oracle(&FQuery::ints(3, 1, 2), 64).unwrap();
        assert!(g >= q(3, 2));
        assert_eq!(f_grid_oracle(&FQuery::ints(2, 2, 4), 8).unwrap(), Q::zero());
    }

    #[test]
    fn ratio_bound_instance() {
        // (B'/B) F(A,B,C) >= F(A,B',C)
        let f = f_value(&FQuery::ints(7, 5, 3)).unwrap();
        let f2 = f_value(&FQuery::new(Q::from_integer(7), q(5, 2), Q::from_integer(3))).unwrap();
        assert!(f * q(1, 2) >= f2);
    }

    #[test]
    fn seeded_checks_pass() {
        let r = f_sandwich_check(20, 16, 5).unwrap();
        assert!(r.ok(), "{r:?}");
        let r = f_property_check(200, 5).unwrap();
        assert!(r.ok(), "{r:?}");
    }
}
