//! Fixture corpus, divisor sampling and brute-force oracles shared by the
//! integration tests. Oracles here avoid the library's reduction and linear
//! algebra so they can cross-check it.

#![allow(dead_code)]

use graphcurves::graph::{banana, banana_unit, complete, cycle, path, star, theta, triangles_with_bridge};
use graphcurves::{Divisor, Multigraph};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fork() -> Multigraph {
    Multigraph::new(5, vec![(0, 1), (1, 2), (2, 3), (2, 4)]).unwrap()
}

/// Trees on at most five vertices, one per isomorphism class.
pub fn small_trees() -> Vec<(String, Multigraph)> {
    vec![
        ("P1".into(), path(1).unwrap()),
        ("P2".into(), path(2).unwrap()),
        ("P3".into(), path(3).unwrap()),
        ("P4".into(), path(4).unwrap()),
        ("star3".into(), star(3).unwrap()),
        ("P5".into(), path(5).unwrap()),
        ("star4".into(), star(4).unwrap()),
        ("fork".into(), fork()),
    ]
}

/// The fixture corpus used by the acceptance criteria.
pub fn corpus() -> Vec<(String, Multigraph)> {
    let mut out = small_trees();
    for n in 3..=6 {
        out.push((format!("C{n}"), cycle(n).unwrap()));
    }
    for n in 2..=5 {
        out.push((format!("B{n}"), banana_unit(n).unwrap()));
    }
    for lengths in [vec![1, 1, 2], vec![2, 2, 2], vec![1, 3, 5], vec![3, 3, 3, 3]] {
        let name = format!("B({})", lengths.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(","));
        out.push((name, banana(&lengths).unwrap()));
    }
    out.push(("Phi(1)".into(), theta(1).unwrap()));
    out.push(("Phi(2)".into(), theta(2).unwrap()));
    out.push(("K4".into(), complete(4).unwrap()));
    out.push(("triangles+bridge".into(), triangles_with_bridge()));
    out
}

/// Random divisor with degree in `[lo, hi]` and small coefficients.
pub fn sample_divisor(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> Divisor {
    let degree = rng.gen_range(lo..=hi);
    let mut c: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
    let last = n - 1;
    c[last] += degree - c.iter().sum::<i64>();
    Divisor::new(c)
}

/// `div f` computed straight from the edge list.
pub fn laplacian(g: &Multigraph, f: &[i64]) -> Vec<i64> {
    let mut d = vec![0; g.vertex_count()];
    for &(u, v) in g.edges() {
        d[u] += f[u] - f[v];
        d[v] += f[v] - f[u];
    }
    d
}

/// Smallest cut size, by trying every vertex bipartition.
pub fn min_cut(g: &Multigraph) -> usize {
    let n = g.vertex_count();
    (1..(1u32 << (n - 1)))
        .map(|mask| g.edges().iter().filter(|&&(u, v)| ((mask >> u) & 1) != ((mask >> v) & 1)).count())
        .min()
        .unwrap_or(0)
}

/// Brute-force test of `e ∈ div(C^0)`: backtracking over integer `f` with
/// `f(0) = 0`. Any solution has range at most `(n - 1) E^+ / λ`: each gap
/// between consecutive level sets of `f` is paid for by the positive part of
/// `E` inside the upper set, spread over at least `λ` boundary edges. That
/// bound makes the search complete.
pub fn is_principal_brute(g: &Multigraph, e: &[i64]) -> bool {
    let n = g.vertex_count();
    if e.iter().sum::<i64>() != 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let positive: i64 = e.iter().filter(|&&x| x > 0).sum();
    let bound = (n as i64 - 1) * positive / min_cut(g) as i64;
    // BFS order; a vertex is checked once it and its neighbors are assigned
    let order = {
        let dist = g.distances_from(0);
        let mut vs: Vec<usize> = g.vertices().collect();
        vs.sort_by_key(|&v| (dist[v], v));
        vs
    };
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let completes_at: Vec<usize> = g
        .vertices()
        .map(|v| g.incident(v).iter().map(|&(_, w)| position[w]).chain([position[v]]).max().unwrap())
        .collect();
    let mut f = vec![0i64; n];
    search(g, e, &order, &completes_at, bound, 1, &mut f)
}

fn search(
    g: &Multigraph,
    e: &[i64],
    order: &[usize],
    completes_at: &[usize],
    bound: i64,
    i: usize,
    f: &mut [i64],
) -> bool {
    let ok_upto = |f: &[i64], i: usize| {
        g.vertices().filter(|&v| completes_at[v] == i).all(|v| {
            let s: i64 = g.incident(v).iter().map(|&(_, w)| f[v] - f[w]).sum();
            s == e[v]
        })
    };
    if i == 1 && !ok_upto(f, 0) {
        return false;
    }
    if i == order.len() {
        return true;
    }
    let v = order[i];
    for x in -bound..=bound {
        f[v] = x;
        if ok_upto(f, i) && search(g, e, order, completes_at, bound, i + 1, f) {
            return true;
        }
    }
    f[v] = 0;
    false
}

pub fn equivalent_brute(g: &Multigraph, a: &Divisor, b: &Divisor) -> bool {
    let diff: Vec<i64> = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x - y).collect();
    is_principal_brute(g, &diff)
}

/// Effective divisors of degree `k` on `n` vertices, any order.
pub fn effective(n: usize, k: i64) -> Vec<Vec<i64>> {
    if k < 0 {
        return vec![];
    }
    if n == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in 0..=k {
        for mut rest in effective(n - 1, k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `|D| != ∅` by searching every effective divisor of the same degree.
pub fn has_effective_brute(g: &Multigraph, d: &Divisor) -> bool {
    effective(g.vertex_count(), d.degree()).into_iter().any(|e| equivalent_brute(g, d, &Divisor::new(e)))
}

/// Rank straight from its definition.
pub fn rank_brute(g: &Multigraph, d: &Divisor) -> i64 {
    if !has_effective_brute(g, d) {
        return -1;
    }
    let mut k = 1;
    loop {
        let all_ok = effective(g.vertex_count(), k).into_iter().all(|e| {
            let rest: Vec<i64> = d.coeffs().iter().zip(&e).map(|(x, y)| x - y).collect();
            has_effective_brute(g, &Divisor::new(rest))
        });
        if !all_ok {
            return k - 1;
        }
        k += 1;
    }
}

/// Number of spanning trees by testing every `(n - 1)`-subset of edges for
/// acyclicity.
pub fn spanning_trees_brute(g: &Multigraph) -> u64 {
    let n = g.vertex_count();
    let m = g.edge_count();
    if n == 1 {
        return 1;
    }
    let mut count = 0;
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut acyclic = true;
        for e in 0..m {
            if (mask >> e) & 1 == 1 {
                let (u, v) = g.endpoints(e);
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a == b {
                    acyclic = false;
                    break;
                }
                parent[a] = b;
            }
        }
        count += u64::from(acyclic);
    }
    count
}
