//! Divisors, linear equivalence, q-reduced representatives and the rank
//! function.
//!
//! Equivalence classes are canonicalized by q-reduction: a divisor is
//! q-reduced when it is nonnegative away from `q` and no nonempty set of
//! non-`q` vertices can fire without some vertex going into debt. Reduction
//! runs in two phases:
//!
//! 1. Levelled borrowing. With `h` the BFS distance to `q`, firing the ball
//!    `{h <= j}` feeds every vertex at level `j + 1` and only drains level
//!    `j`. Sweeping `j` from the outermost level inwards, each ball is fired
//!    just often enough to clear the debt one level further out, so after
//!    one sweep every non-`q` vertex is out of debt.
//! 2. Burning. Fire spreads from `q`; a vertex catches when more burning
//!    edges reach it than it holds chips. The unburnt set can fire legally
//!    and is fired as many times as stays legal. Repeat until everything
//!    burns.
//!
//! Both phases record their firing script, so `D - div(script)` is the
//! reduced divisor. That script doubles as a witness `f` for `D ~ D'`.

use std::collections::{BTreeSet, VecDeque};
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{Multigraph, VertexId};

/// Integer coefficient per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Divisor(Vec<i64>);

impl Divisor {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Divisor(coeffs)
    }

    pub fn zero(n: usize) -> Self {
        Divisor(vec![0; n])
    }

    /// The divisor `(v)`.
    pub fn point(n: usize, v: VertexId) -> Self {
        let mut d = Divisor::zero(n);
        d.0[v] = 1;
        d
    }

    /// Sum of `(v)` over the listed vertices, with repetition.
    pub fn from_points(n: usize, points: &[VertexId]) -> Self {
        let mut d = Divisor::zero(n);
        for &v in points {
            d.0[v] += 1;
        }
        d
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn get(&self, v: VertexId) -> i64 {
        self.0[v]
    }

    pub fn set(&mut self, v: VertexId, value: i64) {
        self.0[v] = value;
    }

    pub fn add_at(&mut self, v: VertexId, delta: i64) {
        self.0[v] += delta;
    }

    /// Errors unless there is one coefficient per vertex of `g`.
    pub fn check_len(&self, g: &Multigraph) -> Result<()> {
        if self.0.len() != g.vertex_count() {
            return Err(Error::Dimension { expected: g.vertex_count(), got: self.0.len() });
        }
        Ok(())
    }
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        Divisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        Divisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        Divisor(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&Divisor> for i64 {
    type Output = Divisor;
    fn mul(self, rhs: &Divisor) -> Divisor {
        Divisor(rhs.0.iter().map(|a| self * a).collect())
    }
}

/// Integer-valued function on vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexFunction(Vec<i64>);

impl VertexFunction {
    pub fn new(values: Vec<i64>) -> Self {
        VertexFunction(values)
    }

    pub fn zero(n: usize) -> Self {
        VertexFunction(vec![0; n])
    }

    /// Indicator function of a vertex set.
    pub fn indicator(n: usize, set: &[VertexId]) -> Self {
        let mut f = VertexFunction::zero(n);
        for &v in set {
            f.0[v] = 1;
        }
        f
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn get(&self, v: VertexId) -> i64 {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Sub for &VertexFunction {
    type Output = VertexFunction;
    fn sub(self, rhs: &VertexFunction) -> VertexFunction {
        VertexFunction(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// The Laplacian: `div(f)(x) = sum over edges xy of f(x) - f(y)`.
pub fn div(g: &Multigraph, f: &VertexFunction) -> Divisor {
    let mut d = Divisor::zero(g.vertex_count());
    for &(u, v) in g.edges() {
        let delta = f.0[u] - f.0[v];
        d.0[u] += delta;
        d.0[v] -= delta;
    }
    d
}

/// `K_G = sum (deg(x) - 2)(x)`.
pub fn canonical_divisor(g: &Multigraph) -> Divisor {
    Divisor(g.vertices().map(|v| g.degree(v) as i64 - 2).collect())
}

/// A divisor that is reduced with respect to `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedDivisor {
    pub base: VertexId,
    pub divisor: Divisor,
}

impl ReducedDivisor {
    pub fn is_effective(&self) -> bool {
        self.divisor.is_effective()
    }
}

/// Fires the vertex set `set` (flags) `times` times.
fn fire(g: &Multigraph, d: &mut [i64], script: &mut [i64], set: &[bool], times: i64) {
    if times == 0 {
        return;
    }
    for &(u, v) in g.edges() {
        if set[u] != set[v] {
            let (inside, outside) = if set[u] { (u, v) } else { (v, u) };
            d[inside] -= times;
            d[outside] += times;
        }
    }
    for (s, &flag) in script.iter_mut().zip(set) {
        if flag {
            *s += times;
        }
    }
}

/// Reduces `d` with respect to `q`; also returns the firing script `f` with
/// `d - div(f)` equal to the reduced divisor.
pub fn reduce_with_script(g: &Multigraph, d: &Divisor, q: VertexId) -> (ReducedDivisor, VertexFunction) {
    let n = g.vertex_count();
    let mut c = d.0.clone();
    let mut script = vec![0i64; n];

    // phase 1: levelled borrowing
    let dist = g.distances_from(q);
    let max_level = dist.iter().copied().max().unwrap_or(0);
    for j in (0..max_level).rev() {
        let mut need = 0i64;
        for v in g.vertices().filter(|&v| dist[v] == j + 1 && c[v] < 0) {
            let gain = g.incident(v).iter().filter(|&&(_, w)| dist[w] == j).count() as i64;
            need = need.max((-c[v] + gain - 1) / gain);
        }
        if need > 0 {
            let ball: Vec<bool> = dist.iter().map(|&h| h <= j).collect();
            fire(g, &mut c, &mut script, &ball, need);
        }
    }
    debug_assert!(g.vertices().all(|v| v == q || c[v] >= 0));

    // phase 2: burning
    loop {
        let mut burnt = vec![false; n];
        let mut hits = vec![0i64; n];
        burnt[q] = true;
        let mut queue = VecDeque::from([q]);
        while let Some(v) = queue.pop_front() {
            for &(_, w) in g.incident(v) {
                if burnt[w] {
                    continue;
                }
                hits[w] += 1;
                if hits[w] > c[w] {
                    burnt[w] = true;
                    queue.push_back(w);
                }
            }
        }
        let unburnt: Vec<bool> = burnt.iter().map(|b| !b).collect();
        if !unburnt.iter().any(|&u| u) {
            break;
        }
        // largest t such that every unburnt vertex stays out of debt
        let times = g
            .vertices()
            .filter(|&v| unburnt[v])
            .filter_map(|v| {
                let out = g.outdeg(&unburnt, v) as i64;
                (out > 0).then(|| c[v] / out)
            })
            .min()
            .expect("a nonempty proper unburnt set has boundary edges");
        fire(g, &mut c, &mut script, &unburnt, times.max(1));
    }
    (ReducedDivisor { base: q, divisor: Divisor(c) }, VertexFunction(script))
}

pub fn reduce(g: &Multigraph, d: &Divisor, q: VertexId) -> ReducedDivisor {
    reduce_with_script(g, d, q).0
}

/// Checks the defining property of a q-reduced divisor directly (burning
/// test, no firing).
pub fn is_reduced(g: &Multigraph, d: &Divisor, q: VertexId) -> bool {
    if g.vertices().any(|v| v != q && d.0[v] < 0) {
        return false;
    }
    let n = g.vertex_count();
    let mut burnt = vec![false; n];
    let mut hits = vec![0i64; n];
    burnt[q] = true;
    let mut queue = VecDeque::from([q]);
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for &(_, w) in g.incident(v) {
            if burnt[w] {
                continue;
            }
            hits[w] += 1;
            if hits[w] > d.0[w] {
                burnt[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == n
}

/// `D ~ D'`, decided by comparing reductions at vertex 0.
pub fn is_equivalent(g: &Multigraph, a: &Divisor, b: &Divisor) -> bool {
    a.degree() == b.degree() && reduce(g, a, 0) == reduce(g, b, 0)
}

/// If `a ~ b`, a function `f` with `a - b = div(f)`.
pub fn equivalence_witness(g: &Multigraph, a: &Divisor, b: &Divisor) -> Option<VertexFunction> {
    let (ra, fa) = reduce_with_script(g, a, 0);
    let (rb, fb) = reduce_with_script(g, b, 0);
    (ra == rb).then(|| &fa - &fb)
}

/// `|D| != ∅`.
pub fn has_effective_rep(g: &Multigraph, d: &Divisor) -> bool {
    d.degree() >= 0 && reduce(g, d, 0).is_effective()
}

/// Effective divisors of degree `k` on `n` vertices, as sorted vertex
/// multisets, in colexicographic order.
#[derive(Clone, Debug)]
pub struct EffectiveDivisors {
    n: usize,
    current: Option<Vec<VertexId>>,
}

pub fn effective_divisors(n: usize, k: usize) -> EffectiveDivisors {
    EffectiveDivisors { n, current: (n > 0 || k == 0).then(|| vec![0; k]) }
}

impl Iterator for EffectiveDivisors {
    type Item = Vec<VertexId>;

    fn next(&mut self) -> Option<Vec<VertexId>> {
        let cur = self.current.take()?;
        let k = cur.len();
        let mut succ = cur.clone();
        let pos = (0..k).find(|&i| {
            let bound = if i + 1 < k { succ[i + 1] } else { self.n - 1 };
            succ[i] < bound
        });
        if let Some(i) = pos {
            succ[i] += 1;
            for x in succ.iter_mut().take(i) {
                *x = 0;
            }
            self.current = Some(succ);
        }
        Some(cur)
    }
}

/// Whether `r(D) >= k`, testing `|D - E| != ∅` for every effective `E` of
/// degree `k`.
pub fn rank_at_least(g: &Multigraph, d: &Divisor, k: i64, exec: Exec) -> bool {
    if k < 0 {
        return true;
    }
    if d.degree() < k {
        return false;
    }
    let n = g.vertex_count();
    let es: Vec<Vec<VertexId>> = effective_divisors(n, k as usize).collect();
    exec.all(&es, |e| {
        let mut m = d.clone();
        for &v in e {
            m.0[v] -= 1;
        }
        has_effective_rep(g, &m)
    })
}

/// The rank `r(D)`.
pub fn rank(g: &Multigraph, d: &Divisor) -> i64 {
    rank_with(g, d, Exec::Sequential)
}

pub fn rank_with(g: &Multigraph, d: &Divisor, exec: Exec) -> i64 {
    let deg = d.degree();
    let genus = g.genus() as i64;
    if deg < 0 || !has_effective_rep(g, d) {
        return -1;
    }
    if deg >= 2 * genus - 1 {
        return deg - genus;
    }
    let mut k = 1;
    while k <= deg && rank_at_least(g, d, k, exec) {
        k += 1;
    }
    k - 1
}

/// `r(D) - r(K - D) - (deg D + 1 - g)`; zero by Riemann–Roch.
pub fn riemann_roch_residual(g: &Multigraph, d: &Divisor) -> i64 {
    let k = canonical_divisor(g);
    let lhs = rank(g, d) - rank(g, &(&k - d));
    lhs - (d.degree() + 1 - g.genus() as i64)
}

/// `r(D) <= deg(D) / 2`, defined when both `|D|` and `|K - D|` are nonempty.
pub fn clifford_check(g: &Multigraph, d: &Divisor) -> Result<bool> {
    let k = canonical_divisor(g);
    if !has_effective_rep(g, d) || !has_effective_rep(g, &(&k - d)) {
        return Err(Error::NotApplicable("Clifford needs |D| and |K - D| nonempty".into()));
    }
    Ok(2 * rank(g, d) <= d.degree())
}

/// `ν(x) = |{e = xy : y < x}| - 1` for the order listed in `ordering`
/// (first = smallest).
pub fn order_divisor(g: &Multigraph, ordering: &[VertexId]) -> Result<Divisor> {
    let n = g.vertex_count();
    let mut position = vec![usize::MAX; n];
    if ordering.len() != n {
        return Err(Error::Dimension { expected: n, got: ordering.len() });
    }
    for (i, &v) in ordering.iter().enumerate() {
        if v >= n || position[v] != usize::MAX {
            return Err(Error::InvalidParameter("ordering must be a permutation of the vertices".into()));
        }
        position[v] = i;
    }
    Ok(Divisor(
        g.vertices()
            .map(|x| g.incident(x).iter().filter(|&&(_, y)| position[y] < position[x]).count() as i64 - 1)
            .collect(),
    ))
}

/// All distinct order divisors, over every linear ordering (`|V| <= 8`).
pub fn all_order_divisors(g: &Multigraph) -> Result<BTreeSet<Divisor>> {
    let n = g.vertex_count();
    if n > 8 {
        return Err(Error::BudgetExceeded { what: format!("{n}! vertex orderings"), limit: 8 });
    }
    Ok((0..n).permutations(n).map(|p| order_divisor(g, &p).expect("permutation")).collect())
}

/// Exactly one of `r(D) >= 0` and "`r(ν - D) >= 0` for some order divisor".
pub fn dichotomy_check(g: &Multigraph, d: &Divisor) -> Result<bool> {
    let nus = all_order_divisors(g)?;
    Ok(dichotomy_with(g, d, &nus))
}

/// Dichotomy test against a precomputed order-divisor set.
pub fn dichotomy_with(g: &Multigraph, d: &Divisor, nus: &BTreeSet<Divisor>) -> bool {
    let first = has_effective_rep(g, d);
    let second = nus.iter().any(|nu| has_effective_rep(g, &(nu - d)));
    first != second
}
