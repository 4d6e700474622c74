//! Explicit tripartite colorings, triangle statistics, random orientations
//! and an exhaustive extremal search for tiny n.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numbers::{balanced_parts, t_tri};

/// Sentinel stored on the diagonal of the color matrix.
pub const NO_COLOR: u32 = u32::MAX;

/// Edge coloring of K_n with one vertex labelling in {0,1,2} per color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub n: usize,
    edge_color: Vec<u32>,
    /// `labels[c][v]`.
    pub labels: Vec<Vec<u8>>,
}

impl Coloring {
    pub fn new(n: usize, num_colors: usize) -> Self {
        Coloring { n, edge_color: vec![NO_COLOR; n * n], labels: vec![vec![0; n]; num_colors] }
    }

    pub fn num_colors(&self) -> usize {
        self.labels.len()
    }

    pub fn color(&self, u: usize, v: usize) -> u32 {
        self.edge_color[u * self.n + v]
    }

    pub fn set_color(&mut self, u: usize, v: usize, c: u32) {
        self.edge_color[u * self.n + v] = c;
        self.edge_color[v * self.n + u] = c;
    }

    pub fn label(&self, c: u32, v: usize) -> u8 {
        self.labels[c as usize][v]
    }

    /// Every edge colored, and every color class properly tripartite.
    pub fn is_valid(&self) -> bool {
        (0..self.n).all(|u| {
            (u + 1..self.n).all(|v| {
                let c = self.color(u, v);
                (c as usize) < self.num_colors() && self.label(c, u) != self.label(c, v)
            })
        })
    }
}

fn blowup_rec(col: &mut Coloring, verts: &[usize]) {
    if verts.len() < 2 {
        return;
    }
    let c = col.labels.len() as u32;
    col.labels.push(vec![0; col.n]);
    let mut groups = Vec::new();
    let mut start = 0;
    for (j, size) in balanced_parts(3, verts.len() as u64).into_iter().enumerate() {
        let g = &verts[start..start + size as usize];
        for &v in g {
            col.labels[c as usize][v] = j as u8;
        }
        groups.push(g.to_vec());
        start += size as usize;
    }
    for a in 0..3 {
        for b in a + 1..3 {
            for &u in &groups[a] {
                for &v in &groups[b] {
                    col.set_color(u, v, c);
                }
            }
        }
    }
    for g in &groups {
        blowup_rec(col, g);
    }
}

/// Balanced iterated blowup with a fresh color per recursion node.
pub fn blowup_coloring(n: usize) -> Coloring {
    let mut col = Coloring::new(n, 0);
    let verts: Vec<usize> = (0..n).collect();
    blowup_rec(&mut col, &verts);
    col
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoringStats {
    pub e3: u64,
    pub pc2: u64,
    pub pc3: u64,
    /// `delta[v][c]`.
    pub delta: Vec<Vec<i64>>,
    /// Color degrees per vertex, largest first, ties to the lower color id.
    pub degseq: Vec<Vec<(u32, i64)>>,
}

impl ColoringStats {
    pub fn primary(&self, v: usize) -> u32 {
        self.degseq[v][0].0
    }

    pub fn d(&self, v: usize, i: usize) -> i64 {
        self.degseq[v].get(i).map_or(0, |x| x.1)
    }
}

pub fn count_stats(col: &Coloring) -> ColoringStats {
    let n = col.n;
    let (mut e3, mut pc2, mut pc3) = (0, 0, 0);
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                let (a, b, c) = (col.color(x, y), col.color(x, z), col.color(y, z));
                if a == b && b == c {
                    e3 += 1;
                } else if a != b && b != c && a != c {
                    pc3 += 1;
                } else {
                    // apex joins the two equal edges; the others are the far ends
                    let (shared, p, q) = if a == b {
                        (a, y, z)
                    } else if a == c {
                        (a, x, z)
                    } else {
                        (b, x, y)
                    };
                    if col.label(shared, p) != col.label(shared, q) {
                        pc2 += 1;
                    }
                }
            }
        }
    }
    let k = col.num_colors();
    let mut delta = vec![vec![0i64; k]; n];
    let mut deg = vec![vec![0i64; k]; n];
    for v in 0..n {
        let mut side = vec![[0i64; 2]; k];
        for u in 0..n {
            if u == v {
                continue;
            }
            let c = col.color(u, v);
            deg[v][c as usize] += 1;
            let j = (col.label(c, u) + 3 - col.label(c, v)) % 3;
            side[c as usize][j as usize - 1] += 1;
        }
        for c in 0..k {
            delta[v][c] = (side[c][0] - side[c][1]).abs();
        }
    }
    let degseq = deg
        .iter()
        .map(|row| {
            let mut s: Vec<(u32, i64)> = row.iter().enumerate().filter(|(_, &d)| d > 0).map(|(c, &d)| (c as u32, d)).collect();
            s.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
            s
        })
        .collect();
    ColoringStats { e3, pc2, pc3, delta, degseq }
}

/// Orientation with `out[u][v]` true iff `u -> v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tournament {
    pub n: usize,
    out: Vec<bool>,
}

impl Tournament {
    pub fn beats(&self, u: usize, v: usize) -> bool {
        self.out[u * self.n + v]
    }

    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let mut out = vec![false; n * n];
        for u in 0..n {
            for v in u + 1..n {
                let f = rng.gen_bool(0.5);
                out[u * n + v] = f;
                out[v * n + u] = !f;
            }
        }
        Tournament { n, out }
    }

    pub fn out_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.beats(v, u)).count()
    }

    pub fn cyclic_triangles(&self) -> u64 {
        let n = self.n;
        let mut c = 0;
        for x in 0..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    let f = self.beats(x, y);
                    if self.beats(y, z) == f && self.beats(z, x) == f {
                        c += 1;
                    }
                }
            }
        }
        c
    }

    pub fn is_valid(&self) -> bool {
        (0..self.n).all(|u| (0..self.n).all(|v| u == v || self.beats(u, v) != self.beats(v, u)))
    }
}

/// `u -> v` iff `c(u) ≡ c(v) + y(c) (mod 3)` for the edge color `c`.
pub fn orient(col: &Coloring, y: &[u8]) -> Tournament {
    assert!(y.len() >= col.num_colors() && y.iter().all(|&s| s == 1 || s == 2));
    let n = col.n;
    let mut out = vec![false; n * n];
    for u in 0..n {
        for v in u + 1..n {
            let c = col.color(u, v);
            let f = (col.label(c, v) + y[c as usize]) % 3 == col.label(c, u);
            out[u * n + v] = f;
            out[v * n + u] = !f;
        }
    }
    Tournament { n, out }
}

/// Bound on label resampling rounds.
pub const LABEL_RETRIES: u32 = 10_000;

pub fn random_tripartite_coloring(n: usize, palette: usize, seed: u64) -> Result<Coloring> {
    if n < 3 || palette < 1 {
        return Err(Error::Precondition("need n >= 3 and a nonempty palette".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..LABEL_RETRIES {
        let labels: Vec<Vec<u8>> = (0..palette).map(|_| (0..n).map(|_| rng.gen_range(0..3)).collect()).collect();
        let mut col = Coloring { n, edge_color: vec![NO_COLOR; n * n], labels };
        let mut ok = true;
        'edges: for u in 0..n {
            for v in u + 1..n {
                let choices: Vec<u32> = (0..palette as u32).filter(|&c| col.label(c, u) != col.label(c, v)).collect();
                if choices.is_empty() {
                    ok = false;
                    break 'edges;
                }
                let c = choices[rng.gen_range(0..choices.len())];
                col.set_color(u, v, c);
            }
        }
        if ok {
            return Ok(col);
        }
    }
    Err(Error::RetryCapExceeded(LABEL_RETRIES))
}

/// Default exhaustive-search cutoff.
pub const BRUTE_CUTOFF: usize = 6;

struct Brute {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// Triangles, each as three edge indices, grouped by their last edge.
    closing: Vec<Vec<[usize; 3]>>,
    colors: Vec<u32>,
    best: u64,
    cap: u64,
}

impl Brute {
    fn tripartite(&self, c: u32, upto: usize) -> bool {
        let mut adj = vec![0u32; self.n];
        for i in 0..=upto {
            if self.colors[i] == c {
                let (u, v) = self.edges[i];
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        let mut lab = vec![u8::MAX; self.n];
        Self::three_color(&adj, &mut lab, 0)
    }

    fn three_color(adj: &[u32], lab: &mut [u8], v: usize) -> bool {
        if v == adj.len() {
            return true;
        }
        for l in 0..3u8 {
            let clash = (0..v).any(|u| adj[v] >> u & 1 == 1 && lab[u] == l);
            if !clash {
                lab[v] = l;
                if Self::three_color(adj, lab, v + 1) {
                    return true;
                }
            }
        }
        false
    }

    /// Triangles among unfinished ones that can still become monochromatic.
    fn potential(&self, next: usize) -> u64 {
        let mut p = 0;
        for tris in &self.closing[next..] {
            for t in tris {
                let assigned: Vec<u32> = t.iter().filter(|&&e| e < next).map(|&e| self.colors[e]).collect();
                if assigned.windows(2).all(|w| w[0] == w[1]) {
                    p += 1;
                }
            }
        }
        p
    }

    fn dfs(&mut self, i: usize, used: u32, e3: u64) {
        if self.best >= self.cap {
            return;
        }
        if i == self.edges.len() {
            self.best = self.best.max(e3);
            return;
        }
        if e3 + self.potential(i) <= self.best {
            return;
        }
        for c in 0..=used {
            self.colors[i] = c;
            if !self.tripartite(c, i) {
                continue;
            }
            let closed = self.closing[i]
                .iter()
                .filter(|t| t.iter().all(|&e| self.colors[e] == c))
                .count() as u64;
            self.dfs(i + 1, used.max(c + 1), e3 + closed);
        }
    }
}

/// Exact maximum number of monochromatic triangles over tripartite colorings
/// of K_n. Colors are introduced in increasing order, and the search stops
/// once the cyclic-triangle maximum `t_tri(n)` is reached.
pub fn brute_force_max(n: usize, cutoff: usize) -> Result<u64> {
    if n > cutoff {
        return Err(Error::CutoffExceeded { n: n as u64, cutoff: cutoff as u64 });
    }
    if n < 3 {
        return Ok(0);
    }
    // colex order
    let mut edges = Vec::new();
    for v in 1..n {
        for u in 0..v {
            edges.push((u, v));
        }
    }
    let idx = |a: usize, b: usize| edges.iter().position(|&e| e == (a.min(b), a.max(b))).unwrap();
    let mut closing = vec![Vec::new(); edges.len()];
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                let t = [idx(x, y), idx(x, z), idx(y, z)];
                let last = *t.iter().max().unwrap();
                closing[last].push(t);
            }
        }
    }
    let m = edges.len();
    let mut b = Brute { n, edges, closing, colors: vec![0; m], best: 0, cap: t_tri(n as i64) as u64 };
    b.dfs(0, 0, 0);
    Ok(b.best)
}

/// Violations found by [`structural_checks`] on one coloring.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StructuralViolations {
    pub precyclic_budget: bool,
    pub imbalance_budget: bool,
    pub d1_bound: bool,
    pub d1_mixed_bound: bool,
    pub top_t_bound: bool,
    pub first_step: bool,
    pub tie_dependence: bool,
    pub mono_not_cyclic: bool,
}

impl StructuralViolations {
    pub fn any(&self) -> bool {
        self.precyclic_budget
            || self.imbalance_budget
            || self.d1_bound
            || self.d1_mixed_bound
            || self.top_t_bound
            || self.first_step
            || self.tie_dependence
            || self.mono_not_cyclic
    }
}

/// Checks the structural inequalities on one coloring under orientation `y`.
pub fn structural_checks(col: &Coloring, y: &[u8]) -> StructuralViolations {
    let n = col.n as i64;
    let st = count_stats(col);
    let (e3, pc2, pc3) = (st.e3 as i64, st.pc2 as i64, st.pc3 as i64);
    let mut v = StructuralViolations {
        precyclic_budget: 2 * pc2 + pc3 > 4 * (t_tri(n) - e3),
        ..Default::default()
    };
    let dsq: i64 = st.delta.iter().flatten().map(|d| d * d).sum();
    v.imbalance_budget = dsq + 4 * pc2 + 2 * pc3 > n * (n + 1) * (n - 1) / 3 - 8 * e3;
    let sum_d = |t: usize| -> i64 { (0..col.n).map(|u| (0..t).map(|i| st.d(u, i)).sum::<i64>()).sum() };
    let d1 = sum_d(1);
    v.d1_bound = 3 * d1 > 2 * n * n;
    let mixed = (1..col.n).any(|u| st.primary(u) != st.primary(0));
    v.d1_mixed_bound = mixed && 3 * d1 > 2 * n * n - (n - 1);
    // (1 - 3^-t) n^2
    v.top_t_bound = (1..=3u32).any(|t| {
        let p = 3i64.pow(t);
        p * sum_d(t as usize) > (p - 1) * n * n
    });
    // largest N_{c,j}(v) against the bipartition it came from
    let big_delta = st.delta.iter().flatten().copied().max().unwrap_or(0);
    let mut worst = (0i64, 0i64);
    for u in 0..col.n {
        for &(c, deg) in &st.degseq[u] {
            let side = (deg + st.delta[u][c as usize]) / 2;
            if side > worst.0 {
                worst = (side, deg);
            }
        }
    }
    v.first_step = 2 * worst.0 > worst.1 + big_delta;
    // multiset of degrees does not depend on tie-breaking
    v.tie_dependence = st.degseq.iter().any(|s| {
        let mut rev = s.clone();
        rev.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
        rev.iter().map(|x| x.1).ne(s.iter().map(|x| x.1))
    });
    let tour = orient(col, y);
    v.mono_not_cyclic = (0..col.n).any(|a| {
        (a + 1..col.n).any(|b| {
            (b + 1..col.n).any(|c| {
                let mono = col.color(a, b) == col.color(a, c) && col.color(a, b) == col.color(b, c);
                let f = tour.beats(a, b);
                mono && !(tour.beats(b, c) == f && tour.beats(c, a) == f)
            })
        })
    });
    v
}

/// `2(C(n,3) - cyclic) = Σ_v [C(out_v, 2) + C(in_v, 2)]`.
pub fn tournament_identity_holds(t: &Tournament) -> bool {
    let n = t.n as i64;
    let c2 = |x: i64| x * (x - 1) / 2;
    let lhs = 2 * (n * (n - 1) * (n - 2) / 6 - t.cyclic_triangles() as i64);
    let rhs: i64 = (0..t.n)
        .map(|v| {
            let o = t.out_degree(v) as i64;
            c2(o) + c2(n - 1 - o)
        })
        .sum();
    lhs == rhs
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PropsReport {
    pub trials: u64,
    /// Samples whose palette had to grow before a proper coloring appeared.
    pub widened_palettes: u64,
    pub colorings_with_violation: u64,
    pub tournament_trials: u64,
    pub tournament_identity_failures: u64,
    pub cyclic_above_max: u64,
}

impl PropsReport {
    pub fn ok(&self) -> bool {
        self.colorings_with_violation == 0 && self.tournament_identity_failures == 0 && self.cyclic_above_max == 0
    }
}

/// Seeded random colorings with n in [4, 12] and palettes in [1, 5].
pub fn run_props(trials: u64, seed: u64) -> Result<PropsReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = PropsReport { trials, ..Default::default() };
    for _ in 0..trials {
        let n = rng.gen_range(4..=12);
        let palette = rng.gen_range(1..=5);
        // small palettes on many vertices are rarely proper; widen until one is
        let mut p = palette;
        let col = loop {
            match random_tripartite_coloring(n, p, rng.gen()) {
                Ok(c) => break c,
                Err(Error::RetryCapExceeded(_)) => p += 1,
                Err(e) => return Err(e),
            }
        };
        if p != palette {
            rep.widened_palettes += 1;
        }
        let y: Vec<u8> = (0..col.num_colors()).map(|_| rng.gen_range(1..=2)).collect();
        if structural_checks(&col, &y).any() {
            rep.colorings_with_violation += 1;
        }
        if orient(&col, &y).cyclic_triangles() as i64 > t_tri(n as i64) {
            rep.cyclic_above_max += 1;
        }
    }
    let tours = trials.clamp(1, 200);
    rep.tournament_trials = tours;
    for _ in 0..tours {
        let n = rng.gen_range(3..=14);
        if !tournament_identity_holds(&Tournament::random(n, &mut rng)) {
            rep.tournament_identity_failures += 1;
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::g_k;

    #[test]
    fn blowup_counts() {
        for n in 1..=30 {
            let col = blowup_coloring(n);
            assert!(col.is_valid(), "n={n}");
            assert_eq!(count_stats(&col).e3 as i128, g_k(3, n as u64), "n={n}");
        }
        assert_eq!(count_stats(&blowup_coloring(12)).e3, 70);
    }

    #[test]
    fn tiny_colorings() {
        let mut mono = Coloring::new(3, 1);
        mono.labels[0] = vec![0, 1, 2];
        for (u, v) in [(0, 1), (0, 2), (1, 2)] {
            mono.set_color(u, v, 0);
        }
        let s = count_stats(&mono);
        assert_eq!((s.e3, s.pc2, s.pc3), (1, 0, 0));
        for y in [1, 2] {
            assert_eq!(orient(&mono, &[y]).cyclic_triangles(), 1);
        }
        let mut rainbow = Coloring::new(3, 3);
        rainbow.labels = vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 1]];
        rainbow.set_color(0, 1, 0);
        rainbow.set_color(0, 2, 1);
        rainbow.set_color(1, 2, 2);
        assert!(rainbow.is_valid());
        assert_eq!(count_stats(&rainbow).pc3, 1);
    }

    #[test]
    fn blowup_six_orientation() {
        let col = blowup_coloring(6);
        let y = vec![1; col.num_colors()];
        let t = orient(&col, &y);
        assert!(t.is_valid());
        let cyc = t.cyclic_triangles();
        assert!(cyc >= 8 && cyc as i64 <= t_tri(6));
    }

    #[test]
    fn random_colorings_are_valid_and_seeded() {
        assert!(random_tripartite_coloring(5, 3, 0).unwrap().is_valid());
        let a = random_tripartite_coloring(20, 4, 7).unwrap();
        let b = random_tripartite_coloring(20, 4, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.is_valid());
        if let Ok(c) = random_tripartite_coloring(12, 1, 3) {
            assert!(c.is_valid());
        }
    }

    #[test]
    fn brute_small() {
        assert_eq!(brute_force_max(3, BRUTE_CUTOFF).unwrap(), 1);
        assert_eq!(brute_force_max(4, BRUTE_CUTOFF).unwrap(), 2);
        assert_eq!(brute_force_max(5, BRUTE_CUTOFF).unwrap(), 4);
        assert_eq!(brute_force_max(6, BRUTE_CUTOFF).unwrap(), 8);
        assert!(brute_force_max(7, BRUTE_CUTOFF).is_err());
    }

    #[test]
    fn props_pass() {
        let r = run_props(100, 11).unwrap();
        assert!(r.ok(), "{r:?}");
    }
}
