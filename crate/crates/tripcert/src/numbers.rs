//! Exact integer sequences: bipartite maxima, iterated blowup counts,
//! cyclic-triangle maxima and the derived slack quantities.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Maximum number of edges of a bipartite graph on `x` vertices; 0 for `x < 0`.
pub fn bip(x: i64) -> i64 {
    if x <= 0 {
        0
    } else {
        (x / 2) * ((x + 1) / 2)
    }
}

/// Balanced composition of `n` into `k` parts, larger parts first.
pub fn balanced_parts(k: u32, n: u64) -> Vec<u64> {
    let k64 = k as u64;
    let (q, r) = (n / k64, n % k64);
    (0..k64).map(|i| if i < r { q + 1 } else { q }).collect()
}

/// Edge count of the balanced iterated blowup of a `k`-edge on `n` vertices.
pub fn g_k(k: u32, n: u64) -> i128 {
    assert!(k >= 2, "uniformity must be at least 2");
    let mut memo = HashMap::new();
    g_k_memo(k, n, &mut memo)
}

fn g_k_memo(k: u32, n: u64, memo: &mut HashMap<u64, i128>) -> i128 {
    if n < k as u64 {
        return 0;
    }
    if let Some(&v) = memo.get(&n) {
        return v;
    }
    let parts = balanced_parts(k, n);
    let mut prod: i128 = 1;
    let mut rec: i128 = 0;
    for &p in &parts {
        prod = prod.checked_mul(p as i128).expect("g_k overflow");
        rec += g_k_memo(k, p, memo);
    }
    let v = prod.checked_add(rec).expect("g_k overflow");
    memo.insert(n, v);
    v
}

/// Maximum over all compositions, used to validate the balanced shortcut.
#[derive(Debug)]
pub struct GFullMax {
    k: u32,
    cutoff: u64,
    memo: HashMap<u64, i128>,
}

impl GFullMax {
    /// Enumeration cutoff used by default for `k = 3`.
    pub const DEFAULT_CUTOFF: u64 = 60;

    pub fn new(k: u32, cutoff: u64) -> Self {
        assert!(k >= 2);
        GFullMax { k, cutoff, memo: HashMap::new() }
    }

    pub fn value(&mut self, n: u64) -> Result<i128> {
        if n > self.cutoff {
            return Err(Error::CutoffExceeded { n, cutoff: self.cutoff });
        }
        Ok(self.eval(n))
    }

    fn eval(&mut self, n: u64) -> i128 {
        if n < self.k as u64 {
            return 0;
        }
        if let Some(&v) = self.memo.get(&n) {
            return v;
        }
        // parts are nondecreasing; the objective is symmetric
        let mut best = 0;
        let mut parts = Vec::with_capacity(self.k as usize);
        self.search(n, 1, &mut parts, &mut best);
        self.memo.insert(n, best);
        best
    }

    fn search(&mut self, remaining: u64, min_part: u64, parts: &mut Vec<u64>, best: &mut i128) {
        let slots = self.k as usize - parts.len();
        if slots == 1 {
            if remaining < min_part {
                return;
            }
            parts.push(remaining);
            let prod: i128 = parts.iter().map(|&p| p as i128).product();
            let snapshot = parts.clone();
            let rec: i128 = snapshot.iter().map(|&p| self.eval(p)).sum();
            *best = (*best).max(prod + rec);
            parts.pop();
            return;
        }
        let mut p = min_part;
        while p * slots as u64 <= remaining {
            parts.push(p);
            self.search(remaining - p, p, parts, best);
            parts.pop();
            p += 1;
        }
    }
}

/// Maximum number of cyclic triangles in an `n`-vertex tournament.
pub fn t_tri(n: i64) -> i64 {
    if n < 3 {
        return 0;
    }
    if n % 2 == 1 {
        n * (n * n - 1) / 24
    } else {
        n * (n * n - 4) / 24
    }
}

/// `d` evaluated from the six-case recursion modulo 6 only.
#[derive(Debug, Default)]
pub struct DRecursion {
    memo: HashMap<i64, i64>,
}

impl DRecursion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value(&mut self, n: i64) -> i64 {
        assert!(n >= 1);
        if n <= 3 {
            return 0;
        }
        if let Some(&v) = self.memo.get(&n) {
            return v;
        }
        // n = 6x + r with r in {-2,...,3}
        let x = (n + 2) / 6;
        let r = n - 6 * x;
        let v = match r {
            -2 => 2 * self.value(2 * x - 1) + self.value(2 * x),
            -1 => self.value(2 * x - 1) + 2 * self.value(2 * x) + x,
            0 => 3 * self.value(2 * x),
            1 => 2 * self.value(2 * x) + self.value(2 * x + 1) + x,
            2 => self.value(2 * x) + 2 * self.value(2 * x + 1),
            3 => 3 * self.value(2 * x + 1),
            _ => unreachable!(),
        };
        self.memo.insert(n, v);
        v
    }
}

/// Single-shot evaluation of the recursion.
pub fn d_by_recursion(n: i64) -> i64 {
    DRecursion::new().value(n)
}

/// True iff `n` is a power of 3 or a sum or difference of two powers of 3.
pub fn is_nice(n: i64) -> bool {
    assert!(n >= 1);
    let mut m = n;
    let mut nonzero = 0;
    while m != 0 {
        let r = m.rem_euclid(3);
        if r == 1 {
            nonzero += 1;
            m -= 1;
        } else if r == 2 {
            nonzero += 1;
            m += 1;
        }
        m /= 3;
    }
    nonzero <= 2
}

/// `n(n+1)(n-1)/3 - 8(g(n)+1)` for a given triangle count `g`.
pub fn d_tilde_from(n: i64, g: i64) -> i64 {
    n * (n + 1) * (n - 1) / 3 - 8 * (g + 1)
}

pub fn d_tilde(n: i64) -> i64 {
    d_tilde_from(n, g_k(3, n as u64) as i64)
}

/// Largest `D >= 0` with `D^2 <= d_tilde(n)`, absent if `d_tilde(n) < 0`.
pub fn delta_max(n: i64) -> Option<i64> {
    delta_max_from(d_tilde(n))
}

pub fn delta_max_from(dt: i64) -> Option<i64> {
    if dt < 0 {
        None
    } else {
        Some(dt.isqrt())
    }
}

/// Eagerly built tables for uniformity 3, immutable after construction.
#[derive(Debug, Clone)]
pub struct NumberTables {
    max_n: usize,
    g: Vec<i64>,
    t: Vec<i64>,
    d: Vec<i64>,
    dt: Vec<i64>,
}

impl NumberTables {
    pub fn new(max_n: usize) -> Self {
        let mut g = vec![0i64; max_n + 1];
        for n in 3..=max_n {
            let q = n / 3;
            let r = n % 3;
            let parts = [q + usize::from(r >= 1), q + usize::from(r >= 2), q];
            let prod = parts.iter().map(|&p| p as i64).fold(1i64, |a, b| a.checked_mul(b).expect("overflow"));
            g[n] = prod + parts.iter().map(|&p| g[p]).sum::<i64>();
        }
        let t: Vec<i64> = (0..=max_n).map(|n| t_tri(n as i64)).collect();
        let d: Vec<i64> = (0..=max_n).map(|n| t[n] - g[n]).collect();
        let dt: Vec<i64> = (0..=max_n)
            .map(|n| if n >= 1 { d_tilde_from(n as i64, g[n]) } else { 0 })
            .collect();
        NumberTables { max_n, g, t, d, dt }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    fn idx(&self, n: i64) -> usize {
        assert!(n >= 0 && n as usize <= self.max_n, "n={n} outside table range");
        n as usize
    }

    pub fn g3(&self, n: i64) -> i64 {
        if n < 0 {
            return 0;
        }
        self.g[self.idx(n)]
    }

    pub fn t(&self, n: i64) -> i64 {
        self.t[self.idx(n)]
    }

    pub fn d(&self, n: i64) -> i64 {
        self.d[self.idx(n)]
    }

    pub fn d_tilde(&self, n: i64) -> i64 {
        self.dt[self.idx(n)]
    }

    pub fn delta_max(&self, n: i64) -> Option<i64> {
        delta_max_from(self.d_tilde(n))
    }

    /// Triangles through a vertex required of a minimal counterexample.
    pub fn quota(&self, n: i64) -> i64 {
        self.g3(n) - self.g3(n - 1) + 1
    }
}

/// Bits after the binary point used by [`log2_upper`].
pub const LOG2_FRAC_BITS: u32 = 40;

/// Returns `m` such that `m / 2^40 >= log2(n)`.
pub fn log2_upper(n: u64) -> u128 {
    assert!(n >= 1);
    const FRAC: u32 = 60;
    let e = 63 - n.leading_zeros();
    // y in [1, 2) scaled by 2^60, always rounded up
    let mut y: u128 = ((n as u128) << FRAC).div_ceil(1u128 << e);
    let two: u128 = 2u128 << FRAC;
    let mut bits: u128 = 0;
    for _ in 0..LOG2_FRAC_BITS {
        let sq = (y * y).div_ceil(1u128 << FRAC);
        bits <<= 1;
        if sq >= two {
            bits |= 1;
            y = sq.div_ceil(2);
        } else {
            y = sq;
        }
    }
    ((e as u128) << LOG2_FRAC_BITS) + bits + 1
}

/// Checks `d(n) <= 0.05891 n log2(n)` exactly against the rational log bound.
pub fn d_within_log_bound(n: u64, d: i64) -> bool {
    let l = log2_upper(n);
    let lhs = ((d as u128) * 100_000u128) << LOG2_FRAC_BITS;
    let rhs = 5891u128 * n as u128 * l;
    d >= 0 && lhs <= rhs
}

/// Balanced complete `k`-partite edge count, as an explicit product.
pub fn balanced_product(k: u32, n: u64) -> i128 {
    balanced_parts(k, n).iter().map(|&p| p as i128).product()
}
