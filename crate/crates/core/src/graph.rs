//! Finite connected loopless multigraphs, cuts, bridges, edge connectivity,
//! and the named graph families used throughout the crate.
//!
//! Vertex and edge ids are dense `usize` indices. Parallel edges are distinct
//! edges with distinct ids. Each edge is stored as an ordered pair `(u, v)`;
//! that order is the edge's reference orientation `u -> v`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// An edge together with a direction. `forward` means the reference
/// orientation `u -> v` of the stored pair `(u, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedEdge {
    pub edge: EdgeId,
    pub forward: bool,
}

impl DirectedEdge {
    pub fn new(edge: EdgeId, forward: bool) -> Self {
        DirectedEdge { edge, forward }
    }

    pub fn reversed(self) -> Self {
        DirectedEdge { edge: self.edge, forward: !self.forward }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId)>,
    /// Per vertex: `(edge, other endpoint)` in increasing edge order.
    incidence: Vec<Vec<(EdgeId, VertexId)>>,
}

impl Multigraph {
    /// Builds a graph, rejecting loops, out-of-range endpoints and
    /// disconnected inputs.
    pub fn new(vertex_count: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidGraph("a graph needs at least one vertex".into()));
        }
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge {e} = ({u}, {v}) references a vertex outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::LoopEdge { edge: e, vertex: u });
            }
        }
        let g = Self::build(vertex_count, edges);
        let components = g.component_count(&[]);
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(g)
    }

    fn build(vertex_count: usize, edges: Vec<(VertexId, VertexId)>) -> Self {
        let mut incidence = vec![Vec::new(); vertex_count];
        for (e, &(u, v)) in edges.iter().enumerate() {
            incidence[u].push((e, v));
            incidence[v].push((e, u));
        }
        Multigraph { vertex_count, edges, incidence }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.vertex_count
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn opposite(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn incident(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v].len()
    }

    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        self.incidence[u].iter().filter(|&&(_, w)| w == v).count()
    }

    /// Origin and terminus of a directed edge.
    pub fn ends(&self, d: DirectedEdge) -> (VertexId, VertexId) {
        let (u, v) = self.edges[d.edge];
        if d.forward {
            (u, v)
        } else {
            (v, u)
        }
    }

    /// `|E| - |V| + 1`.
    pub fn genus(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    pub fn is_tree(&self) -> bool {
        self.genus() == 0
    }

    pub fn is_simple(&self) -> bool {
        let mut pairs: Vec<_> = self.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        pairs.sort_unstable();
        pairs.windows(2).all(|w| w[0] != w[1])
    }

    /// Number of connected components after deleting the edges flagged in
    /// `removed` (an empty slice removes nothing).
    pub fn component_count(&self, removed: &[bool]) -> usize {
        let mut seen = vec![false; self.vertex_count];
        let mut count = 0;
        for s in 0..self.vertex_count {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(e, w) in &self.incidence[v] {
                    if removed.get(e).copied().unwrap_or(false) || seen[w] {
                        continue;
                    }
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        count
    }

    /// Breadth-first distances from `root`.
    pub fn distances_from(&self, root: VertexId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(_, w) in &self.incidence[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Edges with exactly one endpoint in `side`.
    pub fn boundary(&self, side: &[bool]) -> Vec<EdgeId> {
        self.edges.iter().enumerate().filter(|&(_, &(u, v))| side[u] != side[v]).map(|(e, _)| e).collect()
    }

    /// Number of edges from `x` to vertices outside `set`.
    pub fn outdeg(&self, set: &[bool], x: VertexId) -> usize {
        self.incidence[x].iter().filter(|&&(_, w)| !set[w]).count()
    }

    /// Minimum size of a nonempty cut; `None` for the one-vertex graph, which
    /// is k-edge-connected for every k.
    pub fn edge_connectivity(&self) -> Option<usize> {
        if self.vertex_count == 1 {
            None
        } else if self.vertex_count <= 20 {
            Some(self.edge_connectivity_by_cuts())
        } else {
            Some(self.edge_connectivity_by_flow())
        }
    }

    pub fn is_k_edge_connected(&self, k: usize) -> bool {
        self.edge_connectivity().is_none_or(|c| c >= k)
    }

    /// Exhaustive minimum over all bipartitions with vertex 0 on one side.
    pub fn edge_connectivity_by_cuts(&self) -> usize {
        let n = self.vertex_count;
        assert!((2..=20).contains(&n), "cut enumeration needs 2..=20 vertices");
        let mut best = usize::MAX;
        // bit i of mask <=> vertex i+1 on the side of vertex 0
        for mask in 0u32..(1u32 << (n - 1)) - 1 {
            let on_side = |v: VertexId| v == 0 || mask >> (v - 1) & 1 == 1;
            let size = self.edges.iter().filter(|&&(u, v)| on_side(u) != on_side(v)).count();
            best = best.min(size);
        }
        best
    }

    /// Minimum over `t` of the unit-capacity max flow from vertex 0 to `t`.
    pub fn edge_connectivity_by_flow(&self) -> usize {
        assert!(self.vertex_count >= 2);
        (1..self.vertex_count).map(|t| self.max_flow(0, t)).min().unwrap()
    }

    fn max_flow(&self, s: VertexId, t: VertexId) -> usize {
        // each undirected edge is a pair of arcs with capacity 1; flow[e] in {-1,0,1}
        // measured along the reference orientation
        let mut flow = vec![0i8; self.edges.len()];
        let mut total = 0;
        loop {
            let mut pred: Vec<Option<(EdgeId, VertexId)>> = vec![None; self.vertex_count];
            let mut seen = vec![false; self.vertex_count];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &(e, w) in &self.incidence[v] {
                    let forward = self.edges[e].0 == v;
                    let residual = if forward { 1 - flow[e] } else { 1 + flow[e] };
                    if residual > 0 && !seen[w] {
                        seen[w] = true;
                        pred[w] = Some((e, v));
                        queue.push_back(w);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut v = t;
            while let Some((e, u)) = pred[v] {
                if self.edges[e].0 == u {
                    flow[e] += 1;
                } else {
                    flow[e] -= 1;
                }
                v = u;
            }
            total += 1;
        }
    }

    /// Edges whose deletion disconnects the graph.
    pub fn bridges(&self) -> Vec<EdgeId> {
        let n = self.vertex_count;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut timer = 0;
        let mut bridges = Vec::new();
        // iterative DFS: (vertex, edge used to enter, next incidence index)
        let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(0, None, 0)];
        disc[0] = 0;
        low[0] = 0;
        timer += 1;
        while let Some(&mut (v, parent_edge, ref mut idx)) = stack.last_mut() {
            if *idx < self.incidence[v].len() {
                let (e, w) = self.incidence[v][*idx];
                *idx += 1;
                if Some(e) == parent_edge {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, Some(e), 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let (Some(e), Some(&(u, _, _))) = (parent_edge, stack.last()) {
                    low[u] = low[u].min(low[v]);
                    if low[v] > disc[u] {
                        bridges.push(e);
                    }
                }
            }
        }
        bridges.sort_unstable();
        bridges
    }

    /// Contracts every bridge. Returns the contracted graph and the vertex
    /// surjection `rho`; contracted vertices are numbered by their smallest
    /// preimage and surviving edges keep their relative order.
    pub fn contract_bridges(&self) -> (Multigraph, Vec<VertexId>) {
        let bridges = self.bridges();
        let mut is_bridge = vec![false; self.edges.len()];
        for &e in &bridges {
            is_bridge[e] = true;
        }
        // union-find over bridge endpoints
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &e in &bridges {
            let (u, v) = self.edges[e];
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru.max(rv)] = ru.min(rv);
            }
        }
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        let rho: Vec<VertexId> = (0..self.vertex_count)
            .map(|v| {
                let r = find(&mut parent, v);
                if label[r] == usize::MAX {
                    label[r] = next;
                    next += 1;
                }
                label[r]
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(e, _)| !is_bridge[e])
            .map(|(_, &(u, v))| (rho[u], rho[v]))
            .collect();
        (Multigraph::build(next, edges), rho)
    }

    /// Replaces every edge by a path of `k` edges. Original vertices keep
    /// their ids; the `k - 1` new vertices of edge `e` follow, edge by edge,
    /// ordered from the first to the second endpoint.
    pub fn subdivide(&self, k: usize) -> Result<Multigraph> {
        if k == 0 {
            return Err(Error::InvalidParameter("subdivision factor must be at least 1".into()));
        }
        let mut n = self.vertex_count;
        let mut edges = Vec::with_capacity(self.edges.len() * k);
        for &(u, v) in &self.edges {
            let mut prev = u;
            for _ in 1..k {
                edges.push((prev, n));
                prev = n;
                n += 1;
            }
            edges.push((prev, v));
        }
        Multigraph::new(n, edges)
    }

    /// Subgraph induced on `keep` (must be connected), relabelled in
    /// increasing vertex order. Returns the graph and old-to-new vertex map.
    pub fn induced(&self, keep: &[bool]) -> Result<(Multigraph, Vec<Option<VertexId>>)> {
        let mut map = vec![None; self.vertex_count];
        let mut n = 0;
        for v in 0..self.vertex_count {
            if keep[v] {
                map[v] = Some(n);
                n += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| keep[u] && keep[v])
            .map(|&(u, v)| (map[u].unwrap(), map[v].unwrap()))
            .collect();
        Ok((Multigraph::new(n, edges)?, map))
    }
}

/// A nonempty proper vertex subset together with its boundary edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub side: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Cut {
    pub fn from_side(g: &Multigraph, side: &[VertexId]) -> Result<Cut> {
        let mut flags = vec![false; g.vertex_count()];
        for &v in side {
            if v >= g.vertex_count() {
                return Err(Error::InvalidParameter(format!("vertex {v} out of range")));
            }
            flags[v] = true;
        }
        let count = flags.iter().filter(|&&f| f).count();
        if count == 0 || count == g.vertex_count() {
            return Err(Error::InvalidParameter("cut side must be a nonempty proper subset".into()));
        }
        let side = (0..g.vertex_count()).filter(|&v| flags[v]).collect();
        Ok(Cut { side, edges: g.boundary(&flags) })
    }

    pub fn side_flags(&self, n: usize) -> Vec<bool> {
        let mut flags = vec![false; n];
        for &v in &self.side {
            flags[v] = true;
        }
        flags
    }
}

// ---------------------------------------------------------------------------
// Named families. Labelings are fixed so fixtures are stable.

/// Path on `n` vertices `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Result<Multigraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("path needs at least one vertex".into()));
    }
    Multigraph::new(n, (1..n).map(|i| (i - 1, i)).collect())
}

/// Cycle on `n >= 2` vertices; edge `i` joins `i` and `i + 1 mod n`.
/// `cycle(2)` is the banana graph with two parallel edges.
pub fn cycle(n: usize) -> Result<Multigraph> {
    if n < 2 {
        return Err(Error::InvalidParameter("cycle needs at least two vertices".into()));
    }
    Multigraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
}

/// Star with centre 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Result<Multigraph> {
    Multigraph::new(leaves + 1, (1..=leaves).map(|i| (0, i)).collect())
}

/// Complete graph on `n` vertices, edges in lexicographic order.
pub fn complete(n: usize) -> Result<Multigraph> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Multigraph::new(n, edges)
}

/// `B(l_1, ..., l_k)`: two vertices `x = 0`, `y = 1` joined by internally
/// disjoint paths of the given lengths. Internal vertices of path `i` are
/// numbered consecutively from the `x` end, after those of earlier paths;
/// the edges of each path are listed from `x` to `y`.
pub fn banana(lengths: &[usize]) -> Result<Multigraph> {
    if lengths.is_empty() {
        return Err(Error::InvalidParameter("banana needs at least one path".into()));
    }
    if lengths.contains(&0) {
        return Err(Error::InvalidParameter("banana path lengths must be at least 1".into()));
    }
    let mut n = 2;
    let mut edges = Vec::new();
    for &l in lengths {
        let mut prev = 0;
        for _ in 1..l {
            edges.push((prev, n));
            prev = n;
            n += 1;
        }
        edges.push((prev, 1));
    }
    Multigraph::new(n, edges)
}

/// `B_n`: two vertices joined by `n` parallel edges.
pub fn banana_unit(n: usize) -> Result<Multigraph> {
    banana(&vec![1; n])
}

/// `Φ(l)`: paths `x_0 .. x_l` (vertices `0..=l`) and `y_0 .. y_l` (vertices
/// `l+1 ..= 2l+1`), plus two parallel edges `x_0 y_0` and two parallel edges
/// `x_l y_l`. Edge order: the x path, the y path, then the two pairs.
pub fn theta(l: usize) -> Result<Multigraph> {
    if l == 0 {
        return Err(Error::InvalidParameter("theta graph needs l >= 1".into()));
    }
    let y = |i: usize| l + 1 + i;
    let mut edges: Vec<_> = (0..l).map(|i| (i, i + 1)).collect();
    edges.extend((0..l).map(|i| (y(i), y(i + 1))));
    edges.extend([(0, y(0)), (0, y(0)), (l, y(l)), (l, y(l))]);
    Multigraph::new(2 * l + 2, edges)
}

/// Two triangles `{0,1,2}` and `{3,4,5}` joined by the bridge `2 - 3`
/// (edge 6).
pub fn triangles_with_bridge() -> Multigraph {
    Multigraph::new(6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]).expect("fixed fixture")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_disconnected() {
        assert!(matches!(Multigraph::new(2, vec![(0, 0), (0, 1)]), Err(Error::LoopEdge { .. })));
        assert!(matches!(Multigraph::new(3, vec![(0, 1)]), Err(Error::Disconnected { components: 2 })));
        assert!(Multigraph::new(0, vec![]).is_err());
        assert!(Multigraph::new(2, vec![(0, 2)]).is_err());
    }

    #[test]
    fn genus_of_families() {
        assert_eq!(path(5).unwrap().genus(), 0);
        assert_eq!(star(4).unwrap().genus(), 0);
        for n in 2..7 {
            assert_eq!(banana_unit(n + 1).unwrap().genus(), n);
        }
        for l in 1..5 {
            let t = theta(l).unwrap();
            assert_eq!(t.genus(), 3);
            assert_eq!(t.vertex_count(), 2 * l + 2);
        }
        let t1 = theta(1).unwrap();
        assert_eq!((t1.vertex_count(), t1.edge_count()), (4, 6));
    }

    #[test]
    fn edge_connectivity_examples() {
        for n in 3..8 {
            assert_eq!(cycle(n).unwrap().edge_connectivity(), Some(2));
        }
        assert_eq!(banana_unit(4).unwrap().edge_connectivity(), Some(4));
        assert_eq!(theta(2).unwrap().edge_connectivity(), Some(2));
        assert_eq!(complete(4).unwrap().edge_connectivity(), Some(3));
        assert_eq!(path(1).unwrap().edge_connectivity(), None);
        assert!(path(1).unwrap().is_k_edge_connected(100));
        assert_eq!(triangles_with_bridge().edge_connectivity(), Some(1));
    }

    #[test]
    fn flow_agrees_with_cut_enumeration() {
        let graphs = [
            complete(5).unwrap(),
            theta(2).unwrap(),
            banana(&[2, 3, 1]).unwrap(),
            triangles_with_bridge(),
            cycle(6).unwrap(),
            banana_unit(5).unwrap(),
        ];
        for g in &graphs {
            assert_eq!(g.edge_connectivity_by_cuts(), g.edge_connectivity_by_flow());
        }
    }

    #[test]
    fn bridges_and_contraction() {
        let k4 = complete(4).unwrap();
        assert!(k4.bridges().is_empty());
        let (c, rho) = k4.contract_bridges();
        assert_eq!(c, k4);
        assert_eq!(rho, vec![0, 1, 2, 3]);

        let p3 = path(3).unwrap();
        assert_eq!(p3.bridges(), vec![0, 1]);
        let (c, rho) = p3.contract_bridges();
        assert_eq!(c.vertex_count(), 1);
        assert_eq!(rho, vec![0, 0, 0]);

        let g = triangles_with_bridge();
        assert_eq!(g.bridges(), vec![6]);
        let (c, rho) = g.contract_bridges();
        assert_eq!(c.vertex_count(), 5);
        assert_eq!(c.edge_count(), 6);
        assert_eq!(c.genus(), g.genus());
        assert_eq!(rho[2], rho[3]);
        assert_eq!(c.degree(rho[2]), 4);
        assert!(c.bridges().is_empty());
        // parallel edges are never bridges
        assert!(banana_unit(2).unwrap().bridges().is_empty());
    }

    #[test]
    fn subdivision() {
        let b2 = banana_unit(2).unwrap();
        let s = b2.subdivide(2).unwrap();
        assert_eq!(s.vertex_count(), 4);
        assert_eq!(s.edge_count(), 4);
        assert!((0..4).all(|v| s.degree(v) == 2));
        assert_eq!(b2.subdivide(1).unwrap(), b2);
        assert!(b2.subdivide(0).is_err());
        assert_eq!(banana_unit(3).unwrap().subdivide(2).unwrap(), banana(&[2, 2, 2]).unwrap());
    }

    #[test]
    fn banana_labeling() {
        let g = banana(&[2, 1, 3]).unwrap();
        assert_eq!(g.edges(), &[(0, 2), (2, 1), (0, 1), (0, 3), (3, 4), (4, 1)]);
        assert!(banana(&[]).is_err());
        assert!(banana(&[1, 0]).is_err());
    }

    #[test]
    fn cut_from_side() {
        let c4 = cycle(4).unwrap();
        let cut = Cut::from_side(&c4, &[0, 1]).unwrap();
        assert_eq!(cut.edges, vec![1, 3]);
        assert!(Cut::from_side(&c4, &[]).is_err());
        assert!(Cut::from_side(&c4, &[0, 1, 2, 3]).is_err());
    }
}
