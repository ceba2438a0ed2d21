//! Graph morphisms, harmonicity certificates, and push/pull of divisors,
//! functions and Jacobian classes.
//!
//! The edge map is explicit data. On multigraphs the vertex map does not
//! determine which parallel edge a horizontal edge lands on, and harmonicity
//! depends on that choice.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::automorphism::Automorphism;
use crate::divisor::{self, canonical_divisor, div, Divisor, VertexFunction};
use crate::error::{Error, Result};
use crate::graph::{DirectedEdge, EdgeId, Multigraph, VertexId};
use crate::jacobian::{self, DivisorClass};
use crate::linalg;

/// Where a source edge goes: onto a target edge, or collapsed to a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeImage {
    Edge(EdgeId),
    Vertex(VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMorphism {
    source: Multigraph,
    target: Multigraph,
    vmap: Vec<VertexId>,
    emap: Vec<EdgeImage>,
}

/// Multiplicities of a harmonic morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarmonicCertificate {
    /// `m(x)` per source vertex.
    pub horizontal: Vec<i64>,
    /// `v(x)`: edges at `x` collapsed to a vertex.
    pub vertical: Vec<i64>,
    pub degree: i64,
}

impl GraphMorphism {
    pub fn new(source: Multigraph, target: Multigraph, vmap: Vec<VertexId>, emap: Vec<EdgeImage>) -> Result<Self> {
        let phi = GraphMorphism { source, target, vmap, emap };
        phi.validate()?;
        Ok(phi)
    }

    /// Checks the morphism axiom edge by edge.
    pub fn validate(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.vmap.len() != s.vertex_count() {
            return Err(Error::Dimension { expected: s.vertex_count(), got: self.vmap.len() });
        }
        if self.emap.len() != s.edge_count() {
            return Err(Error::Dimension { expected: s.edge_count(), got: self.emap.len() });
        }
        if let Some(&v) = self.vmap.iter().find(|&&v| v >= t.vertex_count()) {
            return Err(Error::InvalidParameter(format!("vertex image {v} out of range")));
        }
        for (e, &(x, y)) in s.edges().iter().enumerate() {
            let (fx, fy) = (self.vmap[x], self.vmap[y]);
            match self.emap[e] {
                EdgeImage::Edge(j) => {
                    if j >= t.edge_count() {
                        return Err(Error::NotAMorphism { edge: e, reason: format!("target edge {j} out of range") });
                    }
                    let (a, b) = t.endpoints(j);
                    if !((fx, fy) == (a, b) || (fx, fy) == (b, a)) {
                        return Err(Error::NotAMorphism {
                            edge: e,
                            reason: format!("ends map to {fx},{fy} but target edge {j} joins {a},{b}"),
                        });
                    }
                }
                EdgeImage::Vertex(v) => {
                    if v != fx || v != fy {
                        return Err(Error::NotAMorphism {
                            edge: e,
                            reason: format!("collapsed to {v} but ends map to {fx},{fy}"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Multigraph {
        &self.source
    }

    pub fn target(&self) -> &Multigraph {
        &self.target
    }

    pub fn vmap(&self) -> &[VertexId] {
        &self.vmap
    }

    pub fn emap(&self) -> &[EdgeImage] {
        &self.emap
    }

    /// Image of a directed edge, or `None` if the edge is collapsed.
    pub fn directed_image(&self, d: DirectedEdge) -> Option<DirectedEdge> {
        match self.emap[d.edge] {
            EdgeImage::Vertex(_) => None,
            EdgeImage::Edge(j) => {
                let (tail, _) = self.source.ends(d);
                let (a, _) = self.target.endpoints(j);
                Some(DirectedEdge::new(j, self.vmap[tail] == a))
            }
        }
    }

    /// Harmonicity test; returns the multiplicities when harmonic.
    pub fn is_harmonic(&self) -> Option<HarmonicCertificate> {
        let (s, t) = (&self.source, &self.target);
        let mut horizontal = vec![0i64; s.vertex_count()];
        let mut vertical = vec![0i64; s.vertex_count()];
        for x in s.vertices() {
            let mut counts: BTreeMap<EdgeId, i64> = t.incident(self.vmap[x]).iter().map(|&(j, _)| (j, 0)).collect();
            for &(e, _) in s.incident(x) {
                match self.emap[e] {
                    EdgeImage::Edge(j) => *counts.get_mut(&j)? += 1,
                    EdgeImage::Vertex(_) => vertical[x] += 1,
                }
            }
            let mut values = counts.values();
            let m = values.next().copied().unwrap_or(0);
            if values.any(|&c| c != m) {
                return None;
            }
            horizontal[x] = m;
        }
        let degree = if t.edge_count() == 0 {
            0
        } else {
            let counts: BTreeSet<i64> = (0..t.edge_count())
                .map(|j| self.emap.iter().filter(|&&im| im == EdgeImage::Edge(j)).count() as i64)
                .collect();
            // connected target: harmonicity forces one common fiber size
            debug_assert_eq!(counts.len(), 1);
            *counts.iter().next().expect("target has edges")
        };
        Some(HarmonicCertificate { horizontal, vertical, degree })
    }

    /// `ψ ∘ φ` where `self = φ`.
    pub fn then(&self, psi: &GraphMorphism) -> Result<GraphMorphism> {
        if self.target != psi.source {
            return Err(Error::InvalidParameter("composition: target and source differ".into()));
        }
        let vmap = self.vmap.iter().map(|&v| psi.vmap[v]).collect();
        let emap = self
            .emap
            .iter()
            .map(|im| match *im {
                EdgeImage::Vertex(v) => EdgeImage::Vertex(psi.vmap[v]),
                EdgeImage::Edge(j) => psi.emap[j],
            })
            .collect();
        GraphMorphism::new(self.source.clone(), psi.target.clone(), vmap, emap)
    }

    pub fn push_divisor(&self, d: &Divisor) -> Divisor {
        let mut out = Divisor::zero(self.target.vertex_count());
        for (x, &c) in d.coeffs().iter().enumerate() {
            out.add_at(self.vmap[x], c);
        }
        out
    }

    pub fn pull_function(&self, f: &VertexFunction) -> VertexFunction {
        VertexFunction::new(self.vmap.iter().map(|&v| f.get(v)).collect())
    }

    /// Linear functional `f' -> Δ(f' ∘ φ)(x)` as a vector over target
    /// vertices.
    fn pulled_laplacian_row(&self, x: VertexId) -> Vec<i64> {
        let mut row = vec![0i64; self.target.vertex_count()];
        for &(_, z) in self.source.incident(x) {
            row[self.vmap[x]] += 1;
            row[self.vmap[z]] -= 1;
        }
        row
    }

    /// Whether each `f' -> Δ(f' ∘ φ)(x)` is a rational multiple of
    /// `f' -> Δ'(f')(φ(x))`.
    pub fn is_rational_harmonic(&self) -> bool {
        let t = &self.target;
        self.source.vertices().all(|x| {
            let y = self.vmap[x];
            let mut target_row = vec![0i64; t.vertex_count()];
            for &(_, w) in t.incident(y) {
                target_row[y] += 1;
                target_row[w] -= 1;
            }
            let span = linalg::to_rational(&[target_row]);
            let row = linalg::to_rational(&[self.pulled_laplacian_row(x)]);
            linalg::in_row_span(&span, &row[0])
        })
    }

    /// All multiplicities one, nothing collapsed.
    pub fn is_covering(&self) -> bool {
        self.is_harmonic().is_some_and(|c| c.horizontal.iter().all(|&m| m == 1) && c.vertical.iter().all(|&v| v == 0))
    }
}

/// A morphism bundled with its harmonicity certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicMorphism {
    map: GraphMorphism,
    cert: HarmonicCertificate,
}

/// The Riemann–Hurwitz comparison for one morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiemannHurwitz {
    /// `R = sum (2(m(x) - 1) + v(x))(x)`.
    pub ramification: Divisor,
    /// Whether `K_G = φ^*K_G' + R` coefficientwise.
    pub divisor_identity: bool,
    /// `(2g - 2) - deg φ (2g' - 2) - deg R`.
    pub residual: i64,
}

impl HarmonicMorphism {
    pub fn new(map: GraphMorphism) -> Result<Self> {
        let cert = map.is_harmonic().ok_or(Error::NotHarmonic)?;
        Ok(HarmonicMorphism { map, cert })
    }

    pub fn map(&self) -> &GraphMorphism {
        &self.map
    }

    pub fn certificate(&self) -> &HarmonicCertificate {
        &self.cert
    }

    pub fn source(&self) -> &Multigraph {
        &self.map.source
    }

    pub fn target(&self) -> &Multigraph {
        &self.map.target
    }

    pub fn degree(&self) -> i64 {
        self.cert.degree
    }

    pub fn m(&self, x: VertexId) -> i64 {
        self.cert.horizontal[x]
    }

    pub fn is_constant(&self) -> bool {
        self.map.vmap.iter().all(|&v| v == self.map.vmap[0])
    }

    pub fn is_surjective(&self) -> bool {
        let hit: BTreeSet<VertexId> = self.map.vmap.iter().copied().collect();
        hit.len() == self.target().vertex_count()
            && (0..self.target().edge_count()).all(|j| self.map.emap.contains(&EdgeImage::Edge(j)))
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.cert.horizontal.iter().all(|&m| m >= 1)
    }

    pub fn then(&self, psi: &HarmonicMorphism) -> Result<HarmonicMorphism> {
        HarmonicMorphism::new(self.map.then(&psi.map)?)
    }

    pub fn push_divisor(&self, d: &Divisor) -> Divisor {
        self.map.push_divisor(d)
    }

    /// `φ^*D'(x) = m(x) D'(φ(x))`.
    pub fn pull_divisor(&self, d: &Divisor) -> Divisor {
        Divisor::new(self.map.vmap.iter().enumerate().map(|(x, &y)| self.cert.horizontal[x] * d.get(y)).collect())
    }

    /// `φ_*f(y) = sum over φ(x) = y of m(x) f(x)`.
    pub fn push_function(&self, f: &VertexFunction) -> VertexFunction {
        let mut out = vec![0i64; self.target().vertex_count()];
        for (x, &y) in self.map.vmap.iter().enumerate() {
            out[y] += self.cert.horizontal[x] * f.get(x);
        }
        VertexFunction::new(out)
    }

    pub fn pull_function(&self, f: &VertexFunction) -> VertexFunction {
        self.map.pull_function(f)
    }

    /// `φ_* div f = div φ_*f` and `φ^* div f' = div φ^*f'`.
    pub fn functoriality_check(&self, f: &VertexFunction, f_target: &VertexFunction) -> bool {
        let (s, t) = (self.source(), self.target());
        self.push_divisor(&div(s, f)) == div(t, &self.push_function(f))
            && self.pull_divisor(&div(t, f_target)) == div(s, &self.pull_function(f_target))
    }

    pub fn jac_push(&self, c: &DivisorClass) -> DivisorClass {
        DivisorClass::of(self.target(), &self.push_divisor(c.representative()))
    }

    pub fn jac_pull(&self, c: &DivisorClass) -> DivisorClass {
        DivisorClass::of(self.source(), &self.pull_divisor(c.representative()))
    }

    /// Enumerates `Jac(G')` (up to `bound` elements) and checks that `φ^*`
    /// has trivial kernel.
    pub fn verify_pull_injective(&self, bound: usize) -> Result<bool> {
        let classes = jacobian::enumerate_group(self.target(), bound)?;
        Ok(classes.iter().filter(|c| self.jac_pull(c).is_zero()).count() == 1)
    }

    /// Checks that the images of the generators `[(x) - (x0)]` generate all of
    /// `Jac(G')` (at most `bound` elements).
    pub fn verify_push_surjective(&self, bound: usize) -> Result<bool> {
        let s = self.source();
        let gens: Vec<DivisorClass> = s.vertices().map(|x| self.jac_push(&jacobian::abel_jacobi(s, 0, x))).collect();
        let image = jacobian::closure(self.target(), &gens, bound)?;
        let order = jacobian::spanning_tree_count(self.target());
        Ok(num::BigInt::from(image.len()) == order)
    }

    /// `r_G'(φ_*D) >= r_G(D)`.
    pub fn rank_transfer_check(&self, d: &Divisor) -> bool {
        divisor::rank(self.target(), &self.push_divisor(d)) >= divisor::rank(self.source(), d)
    }

    pub fn riemann_hurwitz(&self) -> RiemannHurwitz {
        let (s, t) = (self.source(), self.target());
        let ramification =
            Divisor::new(s.vertices().map(|x| 2 * (self.cert.horizontal[x] - 1) + self.cert.vertical[x]).collect());
        let pulled = self.pull_divisor(&canonical_divisor(t));
        let divisor_identity = canonical_divisor(s) == &pulled + &ramification;
        let (g, gp) = (s.genus() as i64, t.genus() as i64);
        let residual = (2 * g - 2) - self.degree() * (2 * gp - 2) - ramification.degree();
        RiemannHurwitz { ramification, divisor_identity, residual }
    }
}

pub fn identity(g: &Multigraph) -> GraphMorphism {
    GraphMorphism {
        source: g.clone(),
        target: g.clone(),
        vmap: g.vertices().collect(),
        emap: (0..g.edge_count()).map(EdgeImage::Edge).collect(),
    }
}

/// Everything onto vertex `v` of `target`.
pub fn constant(g: &Multigraph, target: &Multigraph, v: VertexId) -> Result<GraphMorphism> {
    GraphMorphism::new(g.clone(), target.clone(), vec![v; g.vertex_count()], vec![EdgeImage::Vertex(v); g.edge_count()])
}

/// The map onto a single edge `0 -- 1` sending `x` to 1 and everything else
/// to 0; harmonic of degree `deg(x)`.
pub fn harmonic_to_edge(g: &Multigraph, x: VertexId) -> Result<GraphMorphism> {
    if x >= g.vertex_count() || g.vertex_count() < 2 {
        return Err(Error::InvalidParameter("need a vertex of a graph with at least one edge".into()));
    }
    let target = Multigraph::new(2, vec![(0, 1)])?;
    let vmap = g.vertices().map(|v| usize::from(v == x)).collect();
    let emap = g
        .edges()
        .iter()
        .map(|&(u, v)| if u == x || v == x { EdgeImage::Edge(0) } else { EdgeImage::Vertex(0) })
        .collect();
    GraphMorphism::new(g.clone(), target, vmap, emap)
}

/// Collapses the part of `g` hanging off cut vertex `p` that contains
/// `side_vertex` onto `p`; the target is the rest of `g`.
pub fn collapse(g: &Multigraph, p: VertexId, side_vertex: VertexId) -> Result<GraphMorphism> {
    let n = g.vertex_count();
    if p >= n || side_vertex >= n || p == side_vertex {
        return Err(Error::InvalidParameter("collapse needs distinct vertices in range".into()));
    }
    // vertices reachable from side_vertex without passing p
    let mut collapsed = vec![false; n];
    collapsed[side_vertex] = true;
    let mut stack = vec![side_vertex];
    while let Some(v) = stack.pop() {
        for &(_, w) in g.incident(v) {
            if w != p && !collapsed[w] {
                collapsed[w] = true;
                stack.push(w);
            }
        }
    }
    if collapsed.iter().filter(|&&c| c).count() + 1 == n {
        return Err(Error::InvalidParameter(format!("{p} does not separate {side_vertex} from anything")));
    }
    let keep: Vec<bool> = collapsed.iter().map(|c| !c).collect();
    let (target, relabel) = g.induced(&keep)?;
    let new_p = relabel[p].expect("p is kept");
    let vmap: Vec<VertexId> = g.vertices().map(|v| relabel[v].unwrap_or(new_p)).collect();
    let mut next_edge = 0;
    let emap = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            if keep[u] && keep[v] {
                next_edge += 1;
                EdgeImage::Edge(next_edge - 1)
            } else {
                EdgeImage::Vertex(new_p)
            }
        })
        .collect();
    GraphMorphism::new(g.clone(), target, vmap, emap)
}

/// Checks that `group` contains the identity and is closed under composition
/// and inverses.
pub fn check_group(g: &Multigraph, group: &[Automorphism]) -> Result<()> {
    let members: BTreeSet<&Automorphism> = group.iter().collect();
    if !members.contains(&Automorphism::identity(g)) {
        return Err(Error::NotAGroup("identity missing".into()));
    }
    for a in group {
        if !members.contains(&a.inverse()) {
            return Err(Error::NotAGroup("not closed under inverses".into()));
        }
        for b in group {
            if !members.contains(&a.compose(b)) {
                return Err(Error::NotAGroup("not closed under composition".into()));
            }
        }
    }
    Ok(())
}

/// The quotient `G/H` and the projection `π_H`. Vertex classes are numbered
/// by their smallest member, target edges by the smallest edge of the
/// orbit; orbits whose ends are equivalent are dropped.
pub fn quotient(g: &Multigraph, group: &[Automorphism]) -> Result<(Multigraph, GraphMorphism)> {
    check_group(g, group)?;
    let n = g.vertex_count();
    let mut vclass = vec![usize::MAX; n];
    let mut classes = 0;
    for v in g.vertices() {
        if vclass[v] == usize::MAX {
            for a in group {
                vclass[a.vertex(v)] = classes;
            }
            classes += 1;
        }
    }
    let mut emap = vec![EdgeImage::Vertex(0); g.edge_count()];
    let mut seen = vec![false; g.edge_count()];
    let mut target_edges = Vec::new();
    for e in 0..g.edge_count() {
        if seen[e] {
            continue;
        }
        let (u, v) = g.endpoints(e);
        let image = if vclass[u] == vclass[v] {
            EdgeImage::Vertex(vclass[u])
        } else {
            target_edges.push((vclass[u], vclass[v]));
            EdgeImage::Edge(target_edges.len() - 1)
        };
        for a in group {
            let f = a.edge(e);
            seen[f] = true;
            emap[f] = image;
        }
    }
    let target = Multigraph::new(classes, target_edges)?;
    let pi = GraphMorphism::new(g.clone(), target.clone(), vclass, emap)?;
    Ok((target, pi))
}
